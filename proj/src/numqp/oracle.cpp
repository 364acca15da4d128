#include "camp/oracle.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

namespace camp {
namespace {

void check_size(const StageQP & qp)
{
  if (qp.n_v() > kOracleMaxVariables || qp.n_c() > kOracleMaxConstraints) {
    std::ostringstream msg;
    msg << "enumeration oracle limited to n_v <= " << kOracleMaxVariables << " and n_c <= "
        << kOracleMaxConstraints << " (got " << qp.n_v() << ", " << qp.n_c() << ")";
    throw SizeGuard(msg.str());
  }
}

/// Solves min ½vᵀHv + gᵀv s.t. W_B v = d_B. Returns false if W_B is rank deficient.
bool equality_qp(
  const StageQP & qp, const Vector & g, const std::vector<Index> & tight, Vector & v, Vector & lam)
{
  const auto nb = static_cast<Index>(tight.size());
  const Vector v_free = -qp.hessian().solve(g);
  if (nb == 0) {
    v = v_free;
    lam.resize(0);
    return true;
  }
  if (nb > qp.n_v()) { return false; }

  Matrix Wb(nb, qp.n_v());
  Vector db(nb);
  for (Index r = 0; r < nb; ++r) {
    Wb.row(r) = qp.W().row(tight[static_cast<std::size_t>(r)]);
    db[r] = qp.d()[tight[static_cast<std::size_t>(r)]];
  }
  // S λ = W_B v_free − d_B with S = W_B H⁻¹ W_Bᵀ
  Matrix HinvWt(qp.n_v(), nb);
  for (Index r = 0; r < nb; ++r) { HinvWt.col(r) = qp.hessian().solve(Wb.row(r).transpose()); }
  const Matrix S = Wb * HinvWt;
  Eigen::FullPivLU<Matrix> lu(S);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible()) { return false; }
  lam = lu.solve(Wb * v_free - db);
  v = v_free - HinvWt * lam;
  return true;
}

struct Tolerances
{
  double primal = 0.0;
  double dual = 0.0;
};

Tolerances tolerances_for(const StageQP & qp)
{
  double scale = 1.0;
  if (qp.n_c() > 0) { scale += std::max(qp.d().cwiseAbs().maxCoeff(), qp.W().cwiseAbs().maxCoeff()); }
  if (qp.n_v() > 0) { scale += qp.f().cwiseAbs().maxCoeff(); }
  const double rho = qp.n_c() > 0 ? qp.rho().cwiseAbs().maxCoeff() : 0.0;
  return {1e-9 * scale, 1e-9 * (scale + rho)};
}

enum class RowState { Satisfied, Tight, Violated };

}  // namespace

SolveResult enumerate_oracle(const StageQP & qp)
{
  check_size(qp);
  const Index m = qp.n_c();
  const Tolerances tol = tolerances_for(qp);

  SolveResult best;
  best.status = SolveStatus::NumericalFailure;
  best.objective = std::numeric_limits<double>::infinity();

  std::vector<RowState> state(static_cast<std::size_t>(m), RowState::Satisfied);
  std::vector<Index> tight;
  Vector v, lam;
  int hypotheses = 0;

  // odometer over {Satisfied, Tight, Violated}^m
  while (true) {
    ++hypotheses;
    Vector g = qp.f();
    tight.clear();
    for (Index j = 0; j < m; ++j) {
      const auto sj = state[static_cast<std::size_t>(j)];
      if (sj == RowState::Tight) { tight.push_back(j); }
      if (sj == RowState::Violated) { g += qp.rho()[j] * qp.W().row(j).transpose(); }
    }

    if (equality_qp(qp, g, tight, v, lam)) {
      bool consistent = true;
      for (std::size_t r = 0; r < tight.size() && consistent; ++r) {
        const double rho = qp.rho()[tight[r]];
        const double l = lam[static_cast<Index>(r)];
        consistent = l >= -tol.dual && l <= rho + tol.dual;
      }
      const Vector excess = qp.W() * v - qp.d();
      for (Index j = 0; j < m && consistent; ++j) {
        const auto sj = state[static_cast<std::size_t>(j)];
        if (sj == RowState::Satisfied) { consistent = excess[j] <= tol.primal; }
        if (sj == RowState::Violated) { consistent = excess[j] >= -tol.primal; }
      }
      if (consistent) {
        const Vector eps = excess.cwiseMax(0.0);
        const double obj = qp.objective(v, eps);
        if (obj < best.objective) {
          best.v_star = v;
          best.eps_star = eps;
          best.objective = obj;
          best.status = SolveStatus::Optimal;
        }
      }
    }

    Index j = 0;
    for (; j < m; ++j) {
      auto & sj = state[static_cast<std::size_t>(j)];
      if (sj == RowState::Violated) {
        sj = RowState::Satisfied;
        continue;
      }
      sj = sj == RowState::Satisfied ? RowState::Tight : RowState::Violated;
      break;
    }
    if (j == m) { break; }
  }

  best.iterations = hypotheses;
  best.kkt_residual = 0.0;
  return best;
}

SolveResult enumerate_oracle(const SoftQP & qp, const Vector & z) { return enumerate_oracle(qp.at(z)); }

std::optional<Vector> enumerate_hard_oracle(const StageQP & qp)
{
  check_size(qp);
  const Index m = qp.n_c();
  const Tolerances tol = tolerances_for(qp);

  std::optional<Vector> best;
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<Index> active;
  Vector v, lam;

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    active.clear();
    for (Index j = 0; j < m; ++j) {
      if (mask & (std::uint64_t{1} << j)) { active.push_back(j); }
    }
    if (!equality_qp(qp, qp.f(), active, v, lam)) { continue; }
    if (lam.size() && lam.minCoeff() < -tol.dual) { continue; }
    if (m && (qp.W() * v - qp.d()).maxCoeff() > tol.primal) { continue; }
    const double obj = 0.5 * v.dot(qp.hessian().H() * v) + qp.f().dot(v);
    if (obj < best_obj) {
      best_obj = obj;
      best = v;
    }
  }
  return best;
}

}  // namespace camp
