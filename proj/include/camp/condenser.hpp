#pragma once

#include "camp/soft_qp.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace camp {

/// x⁺ = Ax + Bu, y = Cx + Du. Tracking requires D = 0.
struct StateSpaceModel
{
  Matrix A, B, C, D;

  Index n_x() const { return A.rows(); }
  Index n_u() const { return B.cols(); }
  Index n_y() const { return C.rows(); }
};

/// Soft constraint block M·w ≤ g + ε with per-row penalty ρ. Zero rows allowed.
struct ConstraintBlock
{
  Matrix M;
  Vector g;
  Vector rho;

  Index rows() const { return M.rows(); }
};

/**
 * @brief Offset-free output tracking problem in velocity form.
 *
 * Cost Σᵢ₌₁ᴺ ‖Cxᵢ − y_refᵢ‖²_Q + ‖Δuᵢ₋₁‖²_R + ρᵀε, with
 * state constraints at i = 1..N and input / rate constraints at i = 0..N−1.
 * Penalties are the same at every prediction step.
 */
struct TrackingProblem
{
  Matrix Q;
  Matrix R;
  int horizon = 1;
  ConstraintBlock state;
  ConstraintBlock input;
  ConstraintBlock rate;
};

enum class ConstraintKind { State, Input, Rate };

std::string_view to_string(ConstraintKind kind);

/// Where a row of the condensed W came from.
struct RowOrigin
{
  ConstraintKind kind;
  /// prediction step i (state rows: 1..N, input/rate rows: 0..N−1)
  int step;
  /// row of the originating M matrix
  Index row;
};

/// z = [x; u_prev; y_ref(1); ...; y_ref(N)]
struct ZLayout
{
  Index n_x = 0;
  Index n_u = 0;
  Index n_y = 0;
  int horizon = 1;

  Index x_offset() const { return 0; }
  Index u_prev_offset() const { return n_x; }
  Index y_ref_offset() const { return n_x + n_u; }
  Index size() const { return n_x + n_u + horizon * n_y; }
};

/**
 * @brief Condensed soft QP over v = [Δu₀; ...; Δu_{N−1}].
 *
 * Rows of W (and entries of ε) are ordered per prediction block:
 * state rows of x_{b+1}, input rows of u_b, rate rows of Δu_b, for b = 0..N−1.
 */
struct CondensedQP
{
  SoftQP qp;
  ZLayout layout;
  std::vector<RowOrigin> origin;
  /// Constant zᵀ K z dropped from the QP cost, kept for reporting.
  Matrix cost_constant;

  Index n_u() const { return layout.n_u; }
  int horizon() const { return layout.horizon; }
  double constant_cost(const Vector & z) const { return z.dot(cost_constant * z); }
};

CondensedQP condense(const StateSpaceModel & model, const TrackingProblem & prob);

Vector assemble_z(const ZLayout & layout, const Vector & x, const Vector & u_prev, const std::vector<Vector> & y_refs);

/// [v_prev(n_u:); 0] when a previous minimizer exists, else −H⁻¹Fz.
Vector shift_warm_start(const std::optional<Vector> & previous_v, const CondensedQP & cqp, const Vector & z);

/// u_k = u_prev + Δu₀
Vector extract_input(const Vector & v_star, const Vector & u_prev);

}  // namespace camp
