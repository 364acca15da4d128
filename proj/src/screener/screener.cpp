#include "camp/screener.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace camp {

namespace {

ScreenerCache row_norms(const Matrix & W, const Hessian & hessian)
{
  ScreenerCache cache;
  const Index nc = W.rows();
  cache.zeta.resize(nc);
  for (Index j = 0; j < nc; ++j) {
    const Vector row = W.row(j).transpose();
    if (row.isZero(0.0)) {
      cache.zeta[j] = 0.0;
      cache.zero_rows.push_back(j);
      continue;
    }
    // ‖W_j G⁻¹‖₂ = ‖y‖₂ with Gᵀy = W_jᵀ
    cache.zeta[j] = hessian.solve_GT(row).norm();
  }
  cache.W_cols = W;
  return cache;
}

}  // namespace

ScreenerCache precompute_row_norms(const SoftQP & qp) { return row_norms(qp.W(), *qp.hessian()); }

ScreenerCache precompute_row_norms(const StageQP & stage) { return row_norms(stage.W(), stage.hessian()); }

double EllipsoidBound::scaled_distance2(const Vector & v) const
{
  require_dim(v.size(), q.size(), "EllipsoidBound v");
  return (hessian->G() * (v - q)).squaredNorm();
}

bool EllipsoidBound::contains(const Vector & v, double rel_tol) const
{
  return scaled_distance2(v) <= sigma * (1.0 + rel_tol);
}

bool KeptSet::contains(Index j) const { return std::binary_search(rows.begin(), rows.end(), j); }

std::array<Index, 3> count_by_kind(const KeptSet & kept, const std::vector<RowOrigin> & origin)
{
  std::array<Index, 3> counts{0, 0, 0};
  for (const Index j : kept.rows) { ++counts[static_cast<std::size_t>(origin.at(static_cast<std::size_t>(j)).kind)]; }
  return counts;
}

Vector complete_slacks(const Vector & v_tilde, const StageQP & stage)
{
  require_dim(v_tilde.size(), stage.n_v(), "complete_slacks v");
  Vector excess = stage.W() * v_tilde;
  excess -= stage.d();
  return excess.cwiseMax(0.0);
}

Vector complete_slacks(const Vector & v_tilde, const SoftQP & qp, const Vector & z)
{
  return complete_slacks(v_tilde, qp.at(z));
}

EllipsoidBound ellipsoid_bound(const Vector & v_tilde, const Vector & eps_tilde, const StageQP & stage)
{
  require_dim(v_tilde.size(), stage.n_v(), "ellipsoid_bound v");
  require_dim(eps_tilde.size(), stage.n_c(), "ellipsoid_bound eps");
  const Hessian & hess = stage.hessian();
  const Vector h_inv_f = hess.solve(stage.f());

  EllipsoidBound bound;
  bound.q = 0.5 * (v_tilde - h_inv_f);
  bound.sigma = stage.rho().dot(eps_tilde) + 0.25 * (hess.G() * (v_tilde + h_inv_f)).squaredNorm();
  bound.hessian = stage.hessian_ptr();
  return bound;
}

EllipsoidBound ellipsoid_bound(const Vector & v_tilde, const Vector & eps_tilde, const SoftQP & qp, const Vector & z)
{
  return ellipsoid_bound(v_tilde, eps_tilde, qp.at(z));
}

bool bound_is_trivial(const EllipsoidBound & bound, const StageQP & stage)
{
  return bound.sigma <= 1e-14 * (1.0 + stage.f().squaredNorm());
}

KeptSet screen(
  const ScreenerCache & cache,
  const EllipsoidBound & bound,
  const StageQP & stage,
  const Vector & eps_tilde,
  const ScreenOptions & opts)
{
  const Index nc = stage.n_c();
  require_dim(cache.zeta.size(), nc, "screen row norms");
  require_dim(eps_tilde.size(), nc, "screen eps");
  require_dim(bound.q.size(), stage.n_v(), "screen center");

  const double radius = std::sqrt(bound.sigma);
  const Vector Wq = stage.W() * bound.q;
  const Vector & d = stage.d();

  KeptSet kept;
  kept.rows.reserve(static_cast<std::size_t>(std::min<Index>(nc, 64)));
  auto zero_it = cache.zero_rows.begin();
  for (Index j = 0; j < nc; ++j) {
    if (zero_it != cache.zero_rows.end() && *zero_it == j) {
      ++zero_it;
      if (d[j] < 0.0) { kept.rows.push_back(j); }
      continue;
    }
    const double gap = std::abs(d[j] - Wq[j]) - opts.margin * (1.0 + std::abs(d[j]));
    if (radius * cache.zeta[j] >= gap || eps_tilde[j] > 0.0) { kept.rows.push_back(j); }
  }
  return kept;
}

ScreenOutcome screen_candidate(
  const ScreenerCache & cache, const Vector & v_tilde, const StageQP & stage, const ScreenOptions & opts)
{
  const Index nc = stage.n_c();
  const Index nv = stage.n_v();
  require_dim(v_tilde.size(), nv, "screen_candidate v");
  require_dim(cache.zeta.size(), nc, "screen_candidate row norms");
  require_dim(cache.W_cols.rows(), nc, "screen_candidate cached W rows");
  require_dim(cache.W_cols.cols(), nv, "screen_candidate cached W cols");

  const Hessian & hess = stage.hessian();
  const Vector h_inv_f = hess.solve(stage.f());
  Vector W_v(nc), W_h(nc);
  W_v.noalias() = cache.W_cols * v_tilde;
  W_h.noalias() = cache.W_cols * h_inv_f;

  ScreenOutcome out;
  const Vector & d = stage.d();
  out.eps_tilde = (W_v - d).cwiseMax(0.0);
  out.bound.q = 0.5 * (v_tilde - h_inv_f);
  out.bound.sigma = stage.rho().dot(out.eps_tilde) + 0.25 * (hess.G() * (v_tilde + h_inv_f)).squaredNorm();
  out.bound.hessian = stage.hessian_ptr();
  out.trivial = bound_is_trivial(out.bound, stage);
  if (out.trivial) { return out; }

  const double radius = std::sqrt(out.bound.sigma);
  const auto d_abs = d.array().abs();
  const auto gap = (d.array() - 0.5 * (W_v.array() - W_h.array())).abs() - opts.margin * (1.0 + d_abs);
  Eigen::Array<bool, Eigen::Dynamic, 1> keep = (radius * cache.zeta.array() >= gap) || (out.eps_tilde.array() > 0.0);
  for (const Index j : cache.zero_rows) { keep[j] = d[j] < 0.0; }
  for (Index j = 0; j < nc; ++j) {
    if (keep[j]) { out.kept.rows.push_back(j); }
  }
  return out;
}

KeptSet screen(
  const ScreenerCache & cache,
  const EllipsoidBound & bound,
  const SoftQP & qp,
  const Vector & z,
  const Vector & eps_tilde,
  const ScreenOptions & opts)
{
  return screen(cache, bound, qp.at(z), eps_tilde, opts);
}

SoftQP reduce(const SoftQP & qp, const KeptSet & kept)
{
  const Index n = kept.size();
  Matrix W(n, qp.n_v());
  Matrix L(n, qp.n_z());
  Vector c(n), rho(n);
  for (Index r = 0; r < n; ++r) {
    const Index j = kept.rows[static_cast<std::size_t>(r)];
    if (j < 0 || j >= qp.n_c()) { throw DimensionError("reduce: kept row index out of range"); }
    W.row(r) = qp.W().row(j);
    L.row(r) = qp.L().row(j);
    c[r] = qp.c()[j];
    rho[r] = qp.rho()[j];
  }
  return SoftQP(qp.hessian(), qp.F_ptr(), std::move(W), std::move(c), std::move(L), std::move(rho));
}

SolveResult expand_solution(const SolveResult & reduced, const KeptSet & kept, const StageQP & stage, double tol)
{
  require_dim(reduced.v_star.size(), stage.n_v(), "expand_solution v");
  require_dim(reduced.eps_star.size(), kept.size(), "expand_solution eps");

  SolveResult full = reduced;
  full.eps_star = complete_slacks(reduced.v_star, stage);
  auto next_kept = kept.rows.begin();
  for (Index j = 0; j < stage.n_c(); ++j) {
    if (next_kept != kept.rows.end() && *next_kept == j) {
      full.eps_star[j] = reduced.eps_star[std::distance(kept.rows.begin(), next_kept)];
      ++next_kept;
      continue;
    }
    if (full.eps_star[j] > tol) {
      std::ostringstream msg;
      msg << "expand_solution: removed row " << j << " is violated by " << full.eps_star[j];
      throw EquivalenceViolation(msg.str());
    }
  }
  full.objective = stage.objective(full.v_star, full.eps_star);
  return full;
}

SolveResult expand_solution(
  const SolveResult & reduced, const KeptSet & kept, const SoftQP & qp, const Vector & z, double tol)
{
  return expand_solution(reduced, kept, qp.at(z), tol);
}

}  // namespace camp
