#include "camp/soft_qp.hpp"

#include <sstream>

namespace camp {

SoftQP::SoftQP(Matrix H, Matrix F, Matrix W, Vector c, Matrix L, Vector rho)
: hessian_(std::make_shared<const Hessian>(std::move(H))),
  F_(std::make_shared<const Matrix>(std::move(F))),
  W_(std::make_shared<const Matrix>(std::move(W))),
  c_(std::move(c)),
  L_(std::move(L)),
  rho_(std::move(rho))
{
  validate();
}

SoftQP::SoftQP(
  std::shared_ptr<const Hessian> hessian,
  std::shared_ptr<const Matrix> F,
  Matrix W,
  Vector c,
  Matrix L,
  Vector rho)
: hessian_(std::move(hessian)),
  F_(std::move(F)),
  W_(std::make_shared<const Matrix>(std::move(W))),
  c_(std::move(c)),
  L_(std::move(L)),
  rho_(std::move(rho))
{
  validate();
}

void SoftQP::validate() const
{
  const Index nv = n_v(), nc = n_c();
  require_dim(F_->rows(), nv, "SoftQP F rows");
  require_dim(W_->cols(), nv, "SoftQP W cols");
  require_dim(c_.size(), nc, "SoftQP c");
  require_dim(L_.rows(), nc, "SoftQP L rows");
  require_dim(L_.cols(), n_z(), "SoftQP L cols");
  require_dim(rho_.size(), nc, "SoftQP rho");
  for (Index j = 0; j < nc; ++j) {
    if (!(rho_[j] > 0.0)) {
      std::ostringstream msg;
      msg << "SoftQP: penalty rho[" << j << "] = " << rho_[j] << " must be strictly positive";
      throw std::invalid_argument(msg.str());
    }
  }
}

StageQP SoftQP::at(const Vector & z) const
{
  require_dim(z.size(), n_z(), "SoftQP::at z");
  Vector d = c_;
  d.noalias() += L_ * z;
  return StageQP(hessian_, W_, (*F_) * z, std::move(d), rho_);
}

double SoftQP::objective(const Vector & v, const Vector & z, const Vector & eps) const
{
  return at(z).objective(v, eps);
}

StageQP::StageQP(
  std::shared_ptr<const Hessian> hessian, std::shared_ptr<const Matrix> W, Vector f, Vector d, Vector rho)
: hessian_(std::move(hessian)), W_(std::move(W)), f_(std::move(f)), d_(std::move(d)), rho_(std::move(rho))
{
  require_dim(W_->cols(), n_v(), "StageQP W cols");
  require_dim(f_.size(), n_v(), "StageQP f");
  require_dim(d_.size(), n_c(), "StageQP d");
  require_dim(rho_.size(), n_c(), "StageQP rho");
}

StageQP StageQP::select_rows(const std::vector<Index> & rows) const
{
  const auto n = static_cast<Index>(rows.size());
  Matrix W(n, n_v());
  Vector d(n), rho(n);
  for (Index r = 0; r < n; ++r) {
    const Index j = rows[static_cast<std::size_t>(r)];
    W.row(r) = W_->row(j);
    d[r] = d_[j];
    rho[r] = rho_[j];
  }
  return StageQP(hessian_, std::make_shared<const Matrix>(std::move(W)), f_, std::move(d), std::move(rho));
}

double StageQP::objective(const Vector & v, const Vector & eps) const
{
  require_dim(v.size(), n_v(), "StageQP::objective v");
  require_dim(eps.size(), n_c(), "StageQP::objective eps");
  return 0.5 * v.dot(hessian_->H() * v) + v.dot(f_) + rho_.dot(eps);
}

std::string_view to_string(SolveStatus status)
{
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

Vector unconstrained_minimizer(const SoftQP & qp, const Vector & z)
{
  require_dim(z.size(), qp.n_z(), "unconstrained_minimizer z");
  return -qp.hessian()->solve(qp.F() * z);
}

}  // namespace camp
