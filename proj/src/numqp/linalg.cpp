#include "camp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace camp {

void require_dim(Index got, Index expected, const char * what)
{
  if (got != expected) {
    std::ostringstream msg;
    msg << "dimension mismatch in " << what << ": got " << got << ", expected " << expected;
    throw DimensionError(msg.str());
  }
}

Matrix cholesky_factor(const Matrix & H)
{
  require_dim(H.cols(), H.rows(), "cholesky_factor (square)");
  const Index n = H.rows();

  const double scale = n > 0 ? H.cwiseAbs().maxCoeff() : 0.0;
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0)) {
    throw NotPositiveDefinite("cholesky_factor: matrix is not symmetric");
  }

  // Row-oriented upper factorization: G(k, k:) is finished at step k.
  Matrix G = Matrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    double pivot = H(k, k);
    for (Index i = 0; i < k; ++i) { pivot -= G(i, k) * G(i, k); }
    if (!(pivot > 0.0)) {
      std::ostringstream msg;
      msg << "cholesky_factor: pivot " << k << " is " << pivot;
      throw NotPositiveDefinite(msg.str());
    }
    const double gkk = std::sqrt(pivot);
    G(k, k) = gkk;
    for (Index j = k + 1; j < n; ++j) {
      double acc = H(k, j);
      for (Index i = 0; i < k; ++i) { acc -= G(i, k) * G(i, j); }
      G(k, j) = acc / gkk;
    }
  }
  return G;
}

Hessian::Hessian(Matrix H) : H_(std::move(H)), G_(cholesky_factor(H_)) {}

Vector Hessian::solve(const Vector & b) const
{
  require_dim(b.size(), size(), "Hessian::solve");
  Vector y = G_.transpose().triangularView<Eigen::Lower>().solve(b);
  G_.triangularView<Eigen::Upper>().solveInPlace(y);
  return y;
}

Vector Hessian::solve_GT(const Vector & b) const
{
  require_dim(b.size(), size(), "Hessian::solve_GT");
  return G_.transpose().triangularView<Eigen::Lower>().solve(b);
}

}  // namespace camp
