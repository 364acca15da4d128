#include "camp/suites.hpp"

#include "camp/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace camp::suites {
namespace {

double inf_norm(const Vector & x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

Vector uniform_vector(std::mt19937_64 & rng, Index n, double lo, double hi)
{
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector v(n);
  for (Index i = 0; i < n; ++i) { v[i] = dist(rng); }
  return v;
}

Matrix uniform_matrix(std::mt19937_64 & rng, Index rows, Index cols, double lo, double hi)
{
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) { m(i, j) = dist(rng); }
  }
  return m;
}

double scaled_gap(const Vector & a, const Vector & b) { return inf_norm(a - b) / (1.0 + inf_norm(b)); }

class Recorder
{
public:
  explicit Recorder(std::string name) { result_.name = std::move(name); }

  /// Records `value / limit`; the case fails if the ratio exceeds 1.
  void check(double value, double limit, std::size_t instance, const char * what)
  {
    const double ratio = value / limit;
    result_.worst = std::max(result_.worst, std::isfinite(ratio) ? ratio : 1e300);
    if (!(ratio <= 1.0)) { fail(instance, what, value); }
  }

  void require(bool ok, std::size_t instance, const char * what)
  {
    if (!ok) { fail(instance, what, 0.0); }
  }

  void next_case() { ++result_.cases; }
  SuiteResult finish() { return result_; }

private:
  void fail(std::size_t instance, const char * what, double value)
  {
    if (result_.failures++ == 0) {
      std::ostringstream msg;
      msg << "instance " << instance << ": " << what << " (" << value << ")";
      result_.first_failure = msg.str();
    }
  }

  SuiteResult result_;
};

}  // namespace

StageQP random_stage_qp(std::mt19937_64 & rng, Index n_v, Index n_c)
{
  const Matrix M = uniform_matrix(rng, n_v, n_v, -1.0, 1.0);
  Matrix H = M.transpose() * M + 0.1 * Matrix::Identity(n_v, n_v);
  H = 0.5 * (H + H.transpose()).eval();
  auto hessian = std::make_shared<const Hessian>(std::move(H));
  auto W = std::make_shared<const Matrix>(uniform_matrix(rng, n_c, n_v, -1.0, 1.0));
  return StageQP(
    std::move(hessian), std::move(W), uniform_vector(rng, n_v, -2.0, 2.0), uniform_vector(rng, n_c, -1.0, 1.0),
    uniform_vector(rng, n_c, 0.1, 2.0));
}

StageQP random_small_qp(std::mt19937_64 & rng, Index max_nv, Index max_nc)
{
  const Index nv = std::uniform_int_distribution<Index>(1, max_nv)(rng);
  const Index nc = std::uniform_int_distribution<Index>(0, max_nc)(rng);
  return random_stage_qp(rng, nv, nc);
}

Vector candidate(std::mt19937_64 & rng, const StageQP & qp, const Vector & v_star, int kind)
{
  const Vector v_uc = -qp.hessian().solve(qp.f());
  switch (kind % 5) {
    case 0: return uniform_vector(rng, qp.n_v(), -3.0, 3.0);
    case 1: return v_uc;
    case 2: return v_star;
    case 3: return v_star + uniform_vector(rng, qp.n_v(), -1e-3, 1e-3);
    default: return v_uc + uniform_vector(rng, qp.n_v(), -10.0, 10.0);
  }
}

SuiteResult screening_soundness_suite(std::size_t count, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  Recorder rec("screening soundness (reduced vs full, oracle-checked)");
  for (std::size_t i = 0; i < count; ++i) {
    rec.next_case();
    const StageQP qp = random_small_qp(rng);
    const SolveResult full_oracle = enumerate_oracle(qp);
    rec.require(full_oracle.status == SolveStatus::Optimal, i, "oracle failed on full problem");
    if (full_oracle.status != SolveStatus::Optimal) { continue; }

    const Vector v_tilde = candidate(rng, qp, full_oracle.v_star, static_cast<int>(i));
    const Vector eps_tilde = complete_slacks(v_tilde, qp);
    const EllipsoidBound bound = ellipsoid_bound(v_tilde, eps_tilde, qp);
    const KeptSet kept = screen(precompute_row_norms(qp), bound, qp, eps_tilde);
    const StageQP reduced = qp.select_rows(kept.rows);

    const SolveResult red_oracle = enumerate_oracle(reduced);
    const SolveResult full_ipm = solve_soft_qp(qp);
    const SolveResult red_ipm = solve_soft_qp(reduced);
    rec.require(red_oracle.status == SolveStatus::Optimal, i, "oracle failed on reduced problem");
    rec.require(full_ipm.status == SolveStatus::Optimal, i, "IPM failed on full problem");
    rec.require(red_ipm.status == SolveStatus::Optimal, i, "IPM failed on reduced problem");
    if (red_oracle.status != SolveStatus::Optimal || full_ipm.status != SolveStatus::Optimal ||
        red_ipm.status != SolveStatus::Optimal) {
      continue;
    }
    rec.check(scaled_gap(red_oracle.v_star, full_oracle.v_star), 1e-6, i, "oracle: reduced != full");
    rec.check(scaled_gap(red_ipm.v_star, full_ipm.v_star), 1e-6, i, "IPM: reduced != full");
    rec.check(scaled_gap(full_ipm.v_star, full_oracle.v_star), 1e-6, i, "IPM != oracle (full)");
    rec.check(scaled_gap(red_ipm.v_star, red_oracle.v_star), 1e-6, i, "IPM != oracle (reduced)");

    // active or violated rows at the minimizer are never removed
    const Vector excess = qp.W() * full_oracle.v_star - qp.d();
    for (Index j = 0; j < qp.n_c(); ++j) {
      if (excess[j] > -1e-9) { rec.require(kept.contains(j), i, "active row removed"); }
    }
  }
  return rec.finish();
}

SuiteResult solver_quality_suite(std::size_t count, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  Recorder rec("solver quality (IPM vs oracle, KKT, slack structure)");
  const SolverOptions opts;
  for (std::size_t i = 0; i < count; ++i) {
    rec.next_case();
    const StageQP qp = random_small_qp(rng);
    const SolveResult ipm = solve_soft_qp(qp, opts);
    const SolveResult oracle = enumerate_oracle(qp);
    rec.require(ipm.status == SolveStatus::Optimal, i, "IPM not optimal");
    rec.require(oracle.status == SolveStatus::Optimal, i, "oracle failed");
    if (ipm.status != SolveStatus::Optimal || oracle.status != SolveStatus::Optimal) { continue; }

    rec.check(scaled_gap(ipm.v_star, oracle.v_star), 1e-6, i, "IPM != oracle");
    rec.check(ipm.kkt_residual, opts.tol, i, "KKT residual above tolerance");
    const double obj = qp.objective(ipm.v_star, ipm.eps_star);
    rec.check(std::abs(obj - ipm.objective), 1e-9 * (1.0 + std::abs(obj)), i, "objective inconsistent");
    if (qp.n_c() > 0) {
      const Vector excess = qp.W() * ipm.v_star - qp.d();
      rec.check(inf_norm(ipm.eps_star - excess.cwiseMax(0.0)), 1e-7, i, "slack is not max(0, Wv - d)");
      rec.check(std::max(0.0, -ipm.eps_star.minCoeff()), opts.tol, i, "negative slack");
      rec.check(std::max(0.0, (excess - ipm.eps_star).maxCoeff()), opts.tol, i, "primal infeasible");
    }
  }
  return rec.finish();
}

SuiteResult large_penalty_suite(std::size_t count, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  Recorder rec("large penalty reproduces hard-constrained minimizer");
  std::size_t tried = 0;
  while (rec.finish().cases < count && tried < 50 * count) {
    ++tried;
    const StageQP base = random_small_qp(rng);
    // shift d so that a random point is strictly feasible
    const Vector anchor = uniform_vector(rng, base.n_v(), -1.0, 1.0);
    Vector d = base.d();
    if (base.n_c() > 0) { d = d.cwiseMax(base.W() * anchor + Vector::Constant(base.n_c(), 0.05)); }
    const StageQP qp(base.hessian_ptr(), std::make_shared<const Matrix>(base.W()), base.f(), d,
                     Vector::Constant(base.n_c(), 1e6));
    const auto hard = enumerate_hard_oracle(qp);
    if (!hard) { continue; }
    const std::size_t i = rec.finish().cases;
    rec.next_case();
    const SolveResult soft = enumerate_oracle(qp);
    const SolveResult ipm = solve_soft_qp(qp);
    rec.require(soft.status == SolveStatus::Optimal && ipm.status == SolveStatus::Optimal, i, "solve failed");
    if (soft.status != SolveStatus::Optimal || ipm.status != SolveStatus::Optimal) { continue; }
    rec.check(scaled_gap(soft.v_star, *hard), 1e-9, i, "soft oracle != hard oracle");
    rec.check(scaled_gap(ipm.v_star, *hard), 1e-6, i, "IPM != hard oracle");
    rec.check(inf_norm(soft.eps_star), 1e-9, i, "slack nonzero at large penalty");
  }
  return rec.finish();
}

SuiteResult ellipsoid_suite(std::size_t count, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Recorder rec("ellipsoid containment and kept-set monotonicity");
  for (std::size_t i = 0; i < count; ++i) {
    rec.next_case();
    const StageQP qp = random_small_qp(rng);
    const SolveResult full = enumerate_oracle(qp);
    rec.require(full.status == SolveStatus::Optimal, i, "oracle failed");
    if (full.status != SolveStatus::Optimal) { continue; }

    const Vector v_tilde = candidate(rng, qp, full.v_star, static_cast<int>(i));
    const Vector eps_tilde = complete_slacks(v_tilde, qp);
    const EllipsoidBound bound = ellipsoid_bound(v_tilde, eps_tilde, qp);
    const double scale = 1.0 + bound.sigma;

    rec.check(std::max(0.0, bound.scaled_distance2(v_tilde) - bound.sigma), 1e-9 * scale, i, "candidate outside");
    rec.check(std::max(0.0, bound.scaled_distance2(full.v_star) - bound.sigma), 1e-7 * scale, i, "minimizer outside");

    const ScreenerCache cache = precompute_row_norms(qp);
    EllipsoidBound small = bound, large = bound;
    small.sigma = bound.sigma * unit(rng);
    large.sigma = bound.sigma * (1.0 + 2.0 * unit(rng));
    const KeptSet kept_small = screen(cache, small, qp, eps_tilde);
    const KeptSet kept_large = screen(cache, large, qp, eps_tilde);
    rec.require(
      std::includes(kept_large.rows.begin(), kept_large.rows.end(), kept_small.rows.begin(), kept_small.rows.end()),
      i, "kept set shrank when sigma grew");
  }
  return rec.finish();
}

SuiteResult penalty_monotonicity_suite(std::size_t count, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  Recorder rec("violation non-increasing under penalty growth");
  for (std::size_t i = 0; i < count; ++i) {
    rec.next_case();
    const StageQP base = random_small_qp(rng);
    double previous = std::numeric_limits<double>::infinity();
    for (const double factor : {1.0, 10.0, 100.0}) {
      const StageQP qp(base.hessian_ptr(), std::make_shared<const Matrix>(base.W()), base.f(), base.d(),
                       factor * base.rho());
      const SolveResult res = enumerate_oracle(qp);
      rec.require(res.status == SolveStatus::Optimal, i, "oracle failed");
      if (res.status != SolveStatus::Optimal) { break; }
      // ρᵀε measured with the unscaled penalties
      const double violation = base.rho().dot(res.eps_star);
      rec.check(std::max(0.0, violation - previous), 1e-9 * (1.0 + previous), i, "violation grew with penalty");
      previous = violation;
    }
  }
  return rec.finish();
}

ScalingFit screening_scaling(const std::vector<Index> & n_cs, Index n_v, int repeats, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  struct Case
  {
    StageQP qp;
    ScreenerCache cache;
    Vector v_tilde;
    std::vector<double> times;
  };
  std::vector<Case> cases;
  for (const Index nc : n_cs) {
    const StageQP base = random_stage_qp(rng, n_v, nc);
    // constraints inactive at the unconstrained minimizer
    const Vector v_uc = -base.hessian().solve(base.f());
    const Vector d = base.W() * v_uc + uniform_vector(rng, nc, 5.0, 10.0);
    StageQP qp(base.hessian_ptr(), std::make_shared<const Matrix>(base.W()), base.f(), d, base.rho());
    ScreenerCache cache = precompute_row_norms(qp);
    Vector v_tilde = v_uc + uniform_vector(rng, n_v, -0.1, 0.1);
    cases.push_back({std::move(qp), std::move(cache), std::move(v_tilde), {}});
  }

  // sizes interleaved per repeat; pass 0 is warm-up
  for (int r = 0; r <= repeats; ++r) {
    for (Case & c : cases) {
      const auto start = std::chrono::steady_clock::now();
      const ScreenOutcome outcome = screen_candidate(c.cache, c.v_tilde, c.qp);
      const StageQP reduced = c.qp.select_rows(outcome.kept.rows);
      const auto stop = std::chrono::steady_clock::now();
      if (r > 0) { c.times.push_back(std::chrono::duration<double>(stop - start).count()); }
    }
  }

  ScalingFit fit;
  for (Case & c : cases) {
    auto mid = c.times.begin() + static_cast<std::ptrdiff_t>(c.times.size() / 2);
    std::nth_element(c.times.begin(), mid, c.times.end());
    fit.points.push_back({c.qp.n_c(), *mid});
  }

  // least squares t = slope·n_c + intercept
  const auto n = static_cast<double>(fit.points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto & p : fit.points) {
    const auto x = static_cast<double>(p.n_c);
    sx += x;
    sy += p.t_screen;
    sxx += x * x;
    sxy += x * p.t_screen;
  }
  const double denom = n * sxx - sx * sx;
  fit.slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  for (const auto & p : fit.points) {
    const double pred = fit.slope * static_cast<double>(p.n_c) + fit.intercept;
    ss_res += (p.t_screen - pred) * (p.t_screen - pred);
    ss_tot += (p.t_screen - sy / n) * (p.t_screen - sy / n);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  return fit;
}

}  // namespace camp::suites
