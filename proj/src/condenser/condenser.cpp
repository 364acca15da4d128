#include "camp/condenser.hpp"

#include <sstream>
#include <stdexcept>

namespace camp {
namespace {

void validate_block(const ConstraintBlock & block, Index cols, const char * name)
{
  if (block.rows() == 0) { return; }
  require_dim(block.M.cols(), cols, name);
  require_dim(block.g.size(), block.rows(), name);
  require_dim(block.rho.size(), block.rows(), name);
  for (Index r = 0; r < block.rows(); ++r) {
    if (!(block.rho[r] > 0.0)) {
      std::ostringstream msg;
      msg << name << ": penalty of row " << r << " must be strictly positive";
      throw std::invalid_argument(msg.str());
    }
  }
}

void validate(const StateSpaceModel & model, const TrackingProblem & prob)
{
  const Index nx = model.n_x(), nu = model.n_u(), ny = model.n_y();
  require_dim(model.A.cols(), nx, "model A (square)");
  require_dim(model.B.rows(), nx, "model B rows");
  require_dim(model.C.cols(), nx, "model C cols");
  require_dim(model.D.rows(), ny, "model D rows");
  require_dim(model.D.cols(), nu, "model D cols");
  if (model.D.size() && model.D.cwiseAbs().maxCoeff() != 0.0) {
    throw std::invalid_argument("condense: output tracking requires D = 0");
  }
  require_dim(prob.Q.rows(), ny, "tracking Q rows");
  require_dim(prob.Q.cols(), ny, "tracking Q cols");
  require_dim(prob.R.rows(), nu, "tracking R rows");
  require_dim(prob.R.cols(), nu, "tracking R cols");
  if (prob.horizon < 1) { throw std::invalid_argument("condense: horizon must be >= 1"); }
  validate_block(prob.state, nx, "state constraints");
  validate_block(prob.input, nu, "input constraints");
  validate_block(prob.rate, nu, "rate constraints");
}

}  // namespace

std::string_view to_string(ConstraintKind kind)
{
  switch (kind) {
    case ConstraintKind::State: return "state";
    case ConstraintKind::Input: return "input";
    case ConstraintKind::Rate: return "rate";
  }
  return "unknown";
}

CondensedQP condense(const StateSpaceModel & model, const TrackingProblem & prob)
{
  validate(model, prob);

  const ZLayout layout{model.n_x(), model.n_u(), model.n_y(), prob.horizon};
  const Index nx = layout.n_x, nu = layout.n_u, ny = layout.n_y;
  const int N = layout.horizon;
  const Index nz = layout.size();
  const Index nv = N * nu;
  const Index rows_per_block = prob.state.rows() + prob.input.rows() + prob.rate.rows();
  const Index nc = N * rows_per_block;

  // x_i = Sx z + Sv v and u_i = Uz z + Uv v, advanced step by step.
  Matrix Sx = Matrix::Zero(nx, nz);
  Sx.block(0, layout.x_offset(), nx, nx).setIdentity();
  Matrix Sv = Matrix::Zero(nx, nv);
  Matrix Uz = Matrix::Zero(nu, nz);
  Uz.block(0, layout.u_prev_offset(), nu, nu).setIdentity();
  Matrix Uv = Matrix::Zero(nu, nv);

  Matrix H = Matrix::Zero(nv, nv);
  Matrix F = Matrix::Zero(nv, nz);
  Matrix K = Matrix::Zero(nz, nz);
  Matrix W(nc, nv);
  Matrix L(nc, nz);
  Vector c(nc);
  Vector rho(nc);
  std::vector<RowOrigin> origin;
  origin.reserve(static_cast<std::size_t>(nc));

  Index row = 0;
  auto emit = [&](const ConstraintBlock & block, const Matrix & Mz, const Matrix & Mv, ConstraintKind kind, int step) {
    const Index r = block.rows();
    if (r == 0) { return; }
    W.middleRows(row, r) = Mv;
    L.middleRows(row, r) = -Mz;
    c.segment(row, r) = block.g;
    rho.segment(row, r) = block.rho;
    for (Index k = 0; k < r; ++k) { origin.push_back({kind, step, k}); }
    row += r;
  };

  for (int i = 0; i < N; ++i) {
    Uv.block(0, i * nu, nu, nu) += Matrix::Identity(nu, nu);
    Sx = model.A * Sx + model.B * Uz;
    Sv = model.A * Sv + model.B * Uv;

    // tracking error e = C x_{i+1} − y_ref(i+1)
    Matrix Ez = model.C * Sx;
    Ez.block(0, layout.y_ref_offset() + i * ny, ny, ny) -= Matrix::Identity(ny, ny);
    const Matrix Ev = model.C * Sv;
    const Matrix QEv = prob.Q * Ev;
    H.noalias() += 2.0 * Ev.transpose() * QEv;
    F.noalias() += 2.0 * QEv.transpose() * Ez;
    K.noalias() += Ez.transpose() * (prob.Q * Ez);
    H.block(i * nu, i * nu, nu, nu) += 2.0 * prob.R;

    if (prob.state.rows()) {
      emit(prob.state, prob.state.M * Sx, prob.state.M * Sv, ConstraintKind::State, i + 1);
    }
    if (prob.input.rows()) {
      emit(prob.input, prob.input.M * Uz, prob.input.M * Uv, ConstraintKind::Input, i);
    }
    if (prob.rate.rows()) {
      Matrix Dv = Matrix::Zero(prob.rate.rows(), nv);
      Dv.block(0, i * nu, prob.rate.rows(), nu) = prob.rate.M;
      emit(prob.rate, Matrix::Zero(prob.rate.rows(), nz), Dv, ConstraintKind::Rate, i);
    }
  }

  // symmetrize
  H = 0.5 * (H + H.transpose()).eval();

  return CondensedQP{
    SoftQP(std::move(H), std::move(F), std::move(W), std::move(c), std::move(L), std::move(rho)),
    layout,
    std::move(origin),
    std::move(K)};
}

Vector assemble_z(const ZLayout & layout, const Vector & x, const Vector & u_prev, const std::vector<Vector> & y_refs)
{
  require_dim(x.size(), layout.n_x, "assemble_z x");
  require_dim(u_prev.size(), layout.n_u, "assemble_z u_prev");
  require_dim(static_cast<Index>(y_refs.size()), layout.horizon, "assemble_z reference count");
  Vector z(layout.size());
  z.segment(layout.x_offset(), layout.n_x) = x;
  z.segment(layout.u_prev_offset(), layout.n_u) = u_prev;
  for (std::size_t i = 0; i < y_refs.size(); ++i) {
    require_dim(y_refs[i].size(), layout.n_y, "assemble_z y_ref");
    z.segment(layout.y_ref_offset() + static_cast<Index>(i) * layout.n_y, layout.n_y) = y_refs[i];
  }
  return z;
}

Vector shift_warm_start(const std::optional<Vector> & previous_v, const CondensedQP & cqp, const Vector & z)
{
  if (!previous_v) { return unconstrained_minimizer(cqp.qp, z); }
  const Index nv = cqp.qp.n_v();
  const Index nu = cqp.n_u();
  require_dim(previous_v->size(), nv, "shift_warm_start previous minimizer");
  Vector shifted = Vector::Zero(nv);
  shifted.head(nv - nu) = previous_v->tail(nv - nu);
  return shifted;
}

Vector extract_input(const Vector & v_star, const Vector & u_prev)
{
  const Index nu = u_prev.size();
  if (nu == 0 || v_star.size() < nu || v_star.size() % nu != 0) {
    std::ostringstream msg;
    msg << "extract_input: minimizer of length " << v_star.size() << " is not a stack of inputs of size " << nu;
    throw DimensionError(msg.str());
  }
  return u_prev + v_star.head(nu);
}

}  // namespace camp
