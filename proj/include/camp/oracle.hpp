#pragma once

#include "camp/soft_qp.hpp"

#include <optional>
#include <stdexcept>

namespace camp {

class SizeGuard : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr Index kOracleMaxVariables = 6;
inline constexpr Index kOracleMaxConstraints = 14;

/**
 * @brief Exact minimizer of a small soft QP by active-set enumeration.
 *
 * Every row j of Wv ≤ d + ε, 0 ≤ ε is in one of three KKT-consistent
 * states: satisfied (ε_j = 0, λ_j = 0), tight (ε_j = 0, W_j v = d_j,
 * λ_j ∈ [0, ρ_j]) or violated (ε_j = W_j v − d_j > 0, λ_j = ρ_j). The fourth
 * combination of the two inequality rows (both inactive) forces ρ_j = 0 and is
 * never consistent. Each hypothesis is an equality-constrained QP in v; the
 * best candidate that passes the KKT sign and feasibility checks is returned.
 *
 * Independent of the interior point solver; used as a test oracle.
 * Throws SizeGuard when n_v > 6 or n_c > 14.
 */
SolveResult enumerate_oracle(const StageQP & qp);
SolveResult enumerate_oracle(const SoftQP & qp, const Vector & z);

/// Minimizer of the hard-constrained QP ½vᵀHv + fᵀv s.t. Wv ≤ d by
/// enumeration of 2^n_c active sets; nullopt when infeasible.
std::optional<Vector> enumerate_hard_oracle(const StageQP & qp);

}  // namespace camp
