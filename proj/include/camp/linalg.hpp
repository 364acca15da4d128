#pragma once

#include <Eigen/Core>

#include "camp/errors.hpp"

namespace camp {

/// Dense row-major matrix. Rows of constraint matrices are accessed far more
/// often than columns, so row-major is the default layout.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Throws DimensionError with `what` and the offending sizes when `got != expected`.
void require_dim(Index got, Index expected, const char * what);

/// Upper-triangular G with positive diagonal such that H = GᵀG.
///
/// H must be symmetric (1e-12 relative to its largest entry); any pivot
/// <= 0 raises NotPositiveDefinite.
Matrix cholesky_factor(const Matrix & H);

/**
 * @brief Cached factorization H = GᵀG of a positive definite Hessian.
 *
 * Solves with H go through two triangular solves with G.
 */
class Hessian
{
public:
  explicit Hessian(Matrix H);

  const Matrix & H() const { return H_; }
  const Matrix & G() const { return G_; }
  Index size() const { return H_.rows(); }

  /// H⁻¹ b
  Vector solve(const Vector & b) const;
  /// G⁻ᵀ b, i.e. the y with Gᵀy = b.
  Vector solve_GT(const Vector & b) const;

private:
  Matrix H_;
  Matrix G_;
};

}  // namespace camp
