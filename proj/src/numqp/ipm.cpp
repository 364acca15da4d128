// Mehrotra predictor-corrector interior point method for
//
//   minimize ½vᵀHv + fᵀv + ρᵀε   s.t.  Wv − ε + s = d,  s ≥ 0,  ε ≥ 0.
//
// Duals: λ ≥ 0 on s, μ ≥ 0 on ε. KKT residuals
//
//   r_v = Hv + f + Wᵀλ,   r_ε = ρ − λ − μ,   r_p = Wv − ε − d + s,
//   s∘λ = 0,              ε∘μ = 0.
//
// The ε block of the Newton system is diagonal and is eliminated exactly, which
// leaves the n_v × n_v positive definite system (H + Wᵀ diag(ω) W) Δv = rhs with
// ω = 1 / (s/λ + ε/μ).

#include "camp/soft_qp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace camp {
namespace {

struct Iterate
{
  Vector v, eps, s, lam, mu;
};

struct Direction
{
  Vector dv, deps, ds, dlam, dmu;
};

double max_step(const Vector & x, const Vector & dx)
{
  double alpha = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < x.size(); ++i) {
    if (dx[i] < 0.0) { alpha = std::min(alpha, -x[i] / dx[i]); }
  }
  return alpha;
}

double inf_norm(const Vector & x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

class InteriorPoint
{
public:
  InteriorPoint(const StageQP & qp, const SolverOptions & opts) : qp_(qp), opts_(opts)
  {
    const Matrix & H = qp.hessian().H();
    data_scale_ = std::max(
      {H.cwiseAbs().maxCoeff(),
       qp.W().size() ? qp.W().cwiseAbs().maxCoeff() : 0.0,
       inf_norm(qp.f()),
       inf_norm(qp.d())});
    dual_scale_ = std::max(data_scale_, inf_norm(qp.rho()));
  }

  SolveResult run()
  {
    const Index m = qp_.n_c();
    SolveResult result;

    Iterate it;
    it.v = -qp_.hessian().solve(qp_.f());
    const Vector Wv = qp_.W() * it.v;
    it.eps = (Wv - qp_.d()).cwiseMax(0.0).array() + 1.0;
    it.s = qp_.d() + it.eps - Wv;
    it.lam = Vector::Ones(m);
    it.mu = Vector::Ones(m);

    for (int iter = 0;; ++iter) {
      compute_residuals(it);
      result.kkt_residual = kkt_residual(it);
      result.iterations = iter;
      if (!std::isfinite(result.kkt_residual)) {
        result.status = SolveStatus::NumericalFailure;
        break;
      }
      if (result.kkt_residual <= opts_.tol) {
        result.status = SolveStatus::Optimal;
        break;
      }
      if (iter >= opts_.max_iterations) {
        result.status = SolveStatus::MaxIterations;
        break;
      }
      if (!factorize(it)) {
        result.status = SolveStatus::NumericalFailure;
        break;
      }

      const double gap = (it.s.dot(it.lam) + it.eps.dot(it.mu)) / static_cast<double>(2 * m);

      // predictor
      Vector rs = it.s.cwiseProduct(it.lam);
      Vector rc = it.eps.cwiseProduct(it.mu);
      const Direction aff = direction(it, rs, rc);
      const double alpha_aff = std::min(1.0, step_to_boundary(it, aff));
      const double gap_aff = mean_complementarity(it, aff, alpha_aff);
      const double centering = std::min(1.0, std::pow(gap_aff / gap, 3));

      // corrector
      rs.array() += aff.ds.array() * aff.dlam.array() - centering * gap;
      rc.array() += aff.deps.array() * aff.dmu.array() - centering * gap;
      Direction dir = direction(it, rs, rc);
      double alpha = std::min(1.0, opts_.step_fraction * step_to_boundary(it, dir));

      // centered step with backtracking when the corrector does not reduce the gap
      if (mean_complementarity(it, dir, alpha) > (1.0 - 0.01 * alpha) * gap) {
        rs = it.s.cwiseProduct(it.lam).array() - 0.1 * gap;
        rc = it.eps.cwiseProduct(it.mu).array() - 0.1 * gap;
        dir = direction(it, rs, rc);
        alpha = std::min(1.0, opts_.step_fraction * step_to_boundary(it, dir));
        for (int k = 0; k < 40 && mean_complementarity(it, dir, alpha) > (1.0 - 0.01 * alpha) * gap; ++k) {
          alpha *= 0.7;
        }
      }

      it.v += alpha * dir.dv;
      it.eps += alpha * dir.deps;
      it.s += alpha * dir.ds;
      it.lam += alpha * dir.dlam;
      it.mu += alpha * dir.dmu;
    }

    result.v_star = it.v;
    if (result.status == SolveStatus::Optimal) {
      if (auto polished = polish(it)) { result.v_star = std::move(*polished); }
    }
    // For fixed v the optimal slack is the constraint excess.
    result.eps_star = (qp_.W() * result.v_star - qp_.d()).cwiseMax(0.0);
    result.objective = qp_.objective(result.v_star, result.eps_star);
    return result;
  }

private:
  /// Re-solves the equality QP of the active set read off the final iterate.
  /// Rows that fail their KKT sign or feasibility check switch state and the
  /// solve is repeated; returns nothing if no consistent active set is found.
  std::optional<Vector> polish(const Iterate & it) const
  {
    enum State : char { Satisfied, Tight, Violated };
    const Index m = qp_.n_c();
    const Matrix & W = qp_.W();
    const Vector & d = qp_.d();
    const Vector & rho = qp_.rho();

    std::vector<State> state(static_cast<std::size_t>(m), Satisfied);
    for (Index j = 0; j < m; ++j) {
      if (it.eps[j] > it.mu[j]) {
        state[static_cast<std::size_t>(j)] = Violated;
      } else if (it.s[j] <= it.lam[j]) {
        state[static_cast<std::size_t>(j)] = Tight;
      }
    }

    std::vector<Index> tight;
    for (int pass = 0; pass < 10; ++pass) {
      tight.clear();
      Vector g = qp_.f();
      for (Index j = 0; j < m; ++j) {
        if (state[static_cast<std::size_t>(j)] == Violated) { g += rho[j] * W.row(j).transpose(); }
        if (state[static_cast<std::size_t>(j)] == Tight) { tight.push_back(j); }
      }

      Vector v = -qp_.hessian().solve(g);
      Vector lam_t;
      if (!tight.empty()) {
        const auto nt = static_cast<Index>(tight.size());
        Matrix Wt(nt, W.cols());
        Vector dt(nt);
        for (Index r = 0; r < nt; ++r) {
          Wt.row(r) = W.row(tight[static_cast<std::size_t>(r)]);
          dt[r] = d[tight[static_cast<std::size_t>(r)]];
        }
        Matrix Y(W.cols(), nt);
        for (Index r = 0; r < nt; ++r) { Y.col(r) = qp_.hessian().solve_GT(Wt.row(r).transpose()); }
        const Matrix K = Y.transpose() * Y;
        lam_t = K.completeOrthogonalDecomposition().solve(Wt * v - dt);
        v -= qp_.hessian().solve(Wt.transpose() * lam_t);
      }
      if (!v.allFinite() || inf_norm(v - it.v) > 1e-3 * (1.0 + inf_norm(it.v))) { return std::nullopt; }

      const Vector excess = W * v - d;
      bool consistent = true;
      for (Index j = 0, t = 0; j < m; ++j) {
        const double tol = 1e-9 * (1.0 + std::abs(d[j]));
        State & sj = state[static_cast<std::size_t>(j)];
        const State before = sj;
        switch (sj) {
          case Satisfied:
            if (excess[j] > tol) { sj = Tight; }
            break;
          case Tight: {
            const double lam = lam_t[t++];
            if (lam < -1e-9 * (1.0 + rho[j])) {
              sj = Satisfied;
            } else if (lam > rho[j] * (1.0 + 1e-9)) {
              sj = Violated;
            } else if (std::abs(excess[j]) > tol) {
              // rank-deficient tight rows; the least-norm multipliers missed this one
              return std::nullopt;
            }
            break;
          }
          case Violated:
            if (excess[j] < -tol) { sj = Tight; }
            break;
        }
        consistent = consistent && sj == before;
      }
      if (consistent) { return v; }
    }
    return std::nullopt;
  }

  void compute_residuals(const Iterate & it)
  {
    r_v_ = qp_.hessian().H() * it.v + qp_.f() + qp_.W().transpose() * it.lam;
    r_eps_ = qp_.rho() - it.lam - it.mu;
    r_p_ = qp_.W() * it.v - it.eps - qp_.d() + it.s;
  }

  double kkt_residual(const Iterate & it) const
  {
    // r_ε is scaled by max(data, ρ), the rest by the data scale
    const double primal = std::max(inf_norm(r_v_), inf_norm(r_p_)) / (1.0 + data_scale_);
    const double dual = inf_norm(r_eps_) / (1.0 + dual_scale_);
    const double complementarity =
      std::max(inf_norm(it.s.cwiseProduct(it.lam)), inf_norm(it.eps.cwiseProduct(it.mu))) / (1.0 + data_scale_);
    return std::max({primal, dual, complementarity});
  }

  bool factorize(const Iterate & it)
  {
    theta_ = it.s.cwiseQuotient(it.lam);
    kappa_ = it.mu.cwiseQuotient(it.eps);
    denom_ = (theta_.cwiseProduct(kappa_)).array() + 1.0;
    omega_ = kappa_.cwiseQuotient(denom_);

    Matrix scaled = omega_.cwiseSqrt().asDiagonal() * qp_.W();
    Eigen::MatrixXd schur = qp_.hessian().H();
    schur.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
    llt_.compute(schur);
    return llt_.info() == Eigen::Success && omega_.allFinite();
  }

  Direction direction(const Iterate & it, const Vector & rs, const Vector & rc) const
  {
    Direction dir;
    // aux = r_ε + r_c/ε, b = r_p − r_s/λ − θ∘aux
    const Vector aux = r_eps_ + rc.cwiseQuotient(it.eps);
    const Vector b = r_p_ - rs.cwiseQuotient(it.lam) - theta_.cwiseProduct(aux);
    const Vector lam_shift = aux + kappa_.cwiseProduct(b).cwiseQuotient(denom_);

    const Vector rhs = -r_v_ - qp_.W().transpose() * lam_shift;
    dir.dv = llt_.solve(rhs);
    const Vector Wdv = qp_.W() * dir.dv;
    dir.deps = (Wdv + b).cwiseQuotient(denom_);
    dir.dlam = lam_shift + omega_.cwiseProduct(Wdv);
    dir.dmu = r_eps_ - dir.dlam;
    // ds from the linearized primal equation
    dir.ds = -r_p_ - Wdv + dir.deps;
    return dir;
  }

  static double mean_complementarity(const Iterate & it, const Direction & dir, double alpha)
  {
    const double total = (it.s + alpha * dir.ds).dot(it.lam + alpha * dir.dlam) +
                         (it.eps + alpha * dir.deps).dot(it.mu + alpha * dir.dmu);
    return total / static_cast<double>(2 * it.s.size());
  }

  static double step_to_boundary(const Iterate & it, const Direction & dir)
  {
    return std::min(
      {max_step(it.s, dir.ds), max_step(it.eps, dir.deps), max_step(it.lam, dir.dlam), max_step(it.mu, dir.dmu)});
  }

  const StageQP & qp_;
  const SolverOptions & opts_;
  double data_scale_ = 0.0;
  double dual_scale_ = 0.0;

  Vector r_v_, r_eps_, r_p_;
  Vector theta_, kappa_, denom_, omega_;
  Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt_;
};

}  // namespace

SolveResult solve_soft_qp(const StageQP & qp, const SolverOptions & opts)
{
  if (qp.n_c() == 0) {
    SolveResult result;
    result.v_star = -qp.hessian().solve(qp.f());
    result.eps_star = Vector::Zero(0);
    result.objective = qp.objective(result.v_star, result.eps_star);
    result.status = SolveStatus::Optimal;
    result.iterations = 0;
    result.kkt_residual = inf_norm(qp.hessian().H() * result.v_star + qp.f()) /
                          (1.0 + std::max(qp.hessian().H().cwiseAbs().maxCoeff(), inf_norm(qp.f())));
    return result;
  }
  return InteriorPoint(qp, opts).run();
}

SolveResult solve_soft_qp(const SoftQP & qp, const Vector & z, const SolverOptions & opts)
{
  return solve_soft_qp(qp.at(z), opts);
}

}  // namespace camp
