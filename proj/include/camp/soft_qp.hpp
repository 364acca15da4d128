#pragma once

#include "camp/linalg.hpp"

#include <memory>
#include <string_view>
#include <vector>

namespace camp {

class StageQP;

/**
 * @brief Parametric soft-constrained QP
 *
 *   minimize    ½vᵀHv + vᵀFz + ρᵀε
 *   subject to  Wv ≤ c + Lz + ε,  0 ≤ ε
 *
 * H must be positive definite and ρ strictly positive. The Cholesky factor
 * G (H = GᵀG) is computed once on construction and shared by all copies and
 * reductions of the problem.
 */
class SoftQP
{
public:
  SoftQP(Matrix H, Matrix F, Matrix W, Vector c, Matrix L, Vector rho);

  /// Builds a problem that reuses an already factorized Hessian and F.
  SoftQP(
    std::shared_ptr<const Hessian> hessian,
    std::shared_ptr<const Matrix> F,
    Matrix W,
    Vector c,
    Matrix L,
    Vector rho);

  Index n_v() const { return hessian_->size(); }
  Index n_c() const { return W_->rows(); }
  Index n_z() const { return F_->cols(); }

  const Matrix & H() const { return hessian_->H(); }
  const Matrix & G() const { return hessian_->G(); }
  const Matrix & F() const { return *F_; }
  const Matrix & W() const { return *W_; }
  const Vector & c() const { return c_; }
  const Matrix & L() const { return L_; }
  const Vector & rho() const { return rho_; }

  const std::shared_ptr<const Hessian> & hessian() const { return hessian_; }
  const std::shared_ptr<const Matrix> & F_ptr() const { return F_; }
  const std::shared_ptr<const Matrix> & W_ptr() const { return W_; }

  /// Substitutes the parameter: f = Fz, d = c + Lz.
  StageQP at(const Vector & z) const;

  /// ½vᵀHv + vᵀFz + ρᵀε
  double objective(const Vector & v, const Vector & z, const Vector & eps) const;

private:
  void validate() const;

  std::shared_ptr<const Hessian> hessian_;
  std::shared_ptr<const Matrix> F_;
  std::shared_ptr<const Matrix> W_;
  Vector c_;
  Matrix L_;
  Vector rho_;
};

/**
 * @brief Soft QP with the parameter substituted
 *
 *   minimize ½vᵀHv + fᵀv + ρᵀε  s.t.  Wv ≤ d + ε,  0 ≤ ε
 */
class StageQP
{
public:
  StageQP(std::shared_ptr<const Hessian> hessian, std::shared_ptr<const Matrix> W, Vector f, Vector d, Vector rho);

  Index n_v() const { return hessian_->size(); }
  Index n_c() const { return W_->rows(); }

  const Hessian & hessian() const { return *hessian_; }
  const std::shared_ptr<const Hessian> & hessian_ptr() const { return hessian_; }
  const Matrix & W() const { return *W_; }
  const Vector & f() const { return f_; }
  const Vector & d() const { return d_; }
  const Vector & rho() const { return rho_; }

  /// Keeps the rows listed in `rows` (ascending) and drops the rest.
  StageQP select_rows(const std::vector<Index> & rows) const;

  double objective(const Vector & v, const Vector & eps) const;

private:
  std::shared_ptr<const Hessian> hessian_;
  std::shared_ptr<const Matrix> W_;
  Vector f_;
  Vector d_;
  Vector rho_;
};

struct SolverOptions
{
  /// scaled KKT residual at which the solve is declared optimal
  double tol = 1e-8;
  int max_iterations = 200;
  /// fraction-to-boundary factor
  double step_fraction = 0.995;
};

enum class SolveStatus { Optimal, MaxIterations, NumericalFailure };

std::string_view to_string(SolveStatus status);

struct SolveResult
{
  Vector v_star;
  Vector eps_star;
  double objective = 0.0;
  SolveStatus status = SolveStatus::NumericalFailure;
  int iterations = 0;
  double kkt_residual = 0.0;
};

/// −H⁻¹Fz via the cached Cholesky factor.
Vector unconstrained_minimizer(const SoftQP & qp, const Vector & z);

/// Primal-dual interior point (Mehrotra predictor-corrector) on the (v, ε) block.
SolveResult solve_soft_qp(const StageQP & qp, const SolverOptions & opts = {});
SolveResult solve_soft_qp(const SoftQP & qp, const Vector & z, const SolverOptions & opts = {});

}  // namespace camp
