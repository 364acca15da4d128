#pragma once

#include "camp/condenser.hpp"
#include "camp/soft_qp.hpp"

#include <array>
#include <memory>
#include <stdexcept>
#include <vector>

namespace camp {

/// Offline part of the screening: ζ_j = ‖W_j G⁻¹‖₂ for every constraint row.
struct ScreenerCache
{
  Vector zeta;
  /// rows with W_j = 0; screened on the sign of c_j + L_j z alone
  std::vector<Index> zero_rows;
  /// column-major copy of W for the per-step products
  Eigen::MatrixXd W_cols;
};

ScreenerCache precompute_row_norms(const SoftQP & qp);
ScreenerCache precompute_row_norms(const StageQP & stage);

/**
 * @brief Ellipsoid {v : ‖G(v − q)‖² ≤ σ} that contains the soft QP minimizer.
 *
 * Built from a candidate ṽ and its completed slacks ε̃:
 *   q = ½(ṽ − H⁻¹f),  σ = ρᵀε̃ + ¼‖G(ṽ + H⁻¹f)‖².
 */
struct EllipsoidBound
{
  Vector q;
  double sigma = 0.0;
  std::shared_ptr<const Hessian> hessian;

  /// ‖G(v − q)‖²
  double scaled_distance2(const Vector & v) const;
  bool contains(const Vector & v, double rel_tol = 0.0) const;
};

/// Ascending, duplicate-free row indices of the constraints kept in the reduced QP.
struct KeptSet
{
  std::vector<Index> rows;

  Index size() const { return static_cast<Index>(rows.size()); }
  bool contains(Index j) const;
};

/// Number of kept rows of each ConstraintKind (indexed by the enum value).
std::array<Index, 3> count_by_kind(const KeptSet & kept, const std::vector<RowOrigin> & origin);

/// ε̃ = max(0, Wṽ − c − Lz)
Vector complete_slacks(const Vector & v_tilde, const StageQP & stage);
Vector complete_slacks(const Vector & v_tilde, const SoftQP & qp, const Vector & z);

EllipsoidBound ellipsoid_bound(const Vector & v_tilde, const Vector & eps_tilde, const StageQP & stage);
EllipsoidBound ellipsoid_bound(const Vector & v_tilde, const Vector & eps_tilde, const SoftQP & qp, const Vector & z);

/// True when σ vanishes, i.e. ṽ is the unconstrained minimizer and feasible.
bool bound_is_trivial(const EllipsoidBound & bound, const StageQP & stage);

struct ScreenOptions
{
  /// removal needs |c_j + L_j z − W_j q| − √σ ζ_j > margin·(1 + |c_j + L_j z|)
  double margin = 1e-9;
};

/**
 * @brief Rows that may be active at the minimizer.
 *
 * Row j is kept when √σ ζ_j ≥ |d_j − W_j q| − τ_j or ε̃_j > 0, with
 * d = c + Lz and τ_j = margin·(1 + |d_j|). A row is only removed when the
 * ellipsoid lies strictly inside its half-space.
 */
KeptSet screen(
  const ScreenerCache & cache,
  const EllipsoidBound & bound,
  const StageQP & stage,
  const Vector & eps_tilde,
  const ScreenOptions & opts = {});
KeptSet screen(
  const ScreenerCache & cache,
  const EllipsoidBound & bound,
  const SoftQP & qp,
  const Vector & z,
  const Vector & eps_tilde,
  const ScreenOptions & opts = {});

/// Everything the online step needs from one candidate.
struct ScreenOutcome
{
  Vector eps_tilde;
  EllipsoidBound bound;
  KeptSet kept;
  /// σ vanished: the candidate is the minimizer and no row is kept
  bool trivial = false;
};

/**
 * @brief Candidate slacks, ellipsoid bound and kept set in a single pass over W.
 *
 * Same result as complete_slacks, ellipsoid_bound, bound_is_trivial and
 * screen in sequence; Wṽ and WH⁻¹f come from one product with the cached W.
 */
ScreenOutcome screen_candidate(
  const ScreenerCache & cache, const Vector & v_tilde, const StageQP & stage, const ScreenOptions & opts = {});

/// Problem restricted to the kept rows; shares H, G and F with the original.
SoftQP reduce(const SoftQP & qp, const KeptSet & kept);

class EquivalenceViolation : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/**
 * @brief Embeds a reduced solution into the full problem.
 *
 * Slacks of removed rows are recomputed as max(0, W_j v* − d_j); any value
 * above `tol` means a row that matters was removed and raises
 * EquivalenceViolation. The objective is re-evaluated on the full data.
 */
SolveResult expand_solution(const SolveResult & reduced, const KeptSet & kept, const StageQP & stage, double tol = 1e-7);
SolveResult expand_solution(
  const SolveResult & reduced, const KeptSet & kept, const SoftQP & qp, const Vector & z, double tol = 1e-7);

}  // namespace camp
