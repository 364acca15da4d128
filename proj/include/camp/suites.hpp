#pragma once

#include "camp/screener.hpp"
#include "camp/soft_qp.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

/// Randomized property suites on small soft QPs, checked against the
/// enumeration oracle. Shared by the `selftest` command and the test binaries.
namespace camp::suites {

/// H = MᵀM + 0.1·I and all other data uniform in bounded ranges; ρ ∈ [0.1, 2].
StageQP random_stage_qp(std::mt19937_64 & rng, Index n_v, Index n_c);

/// Random size with n_v ∈ [1, max_nv], n_c ∈ [0, max_nc].
StageQP random_small_qp(std::mt19937_64 & rng, Index max_nv = 4, Index max_nc = 10);

/**
 * @brief Candidate sequences of different quality, chosen by `kind % 5`:
 * uniform in [−3, 3], the unconstrained minimizer, the exact minimizer
 * (tangent ellipsoid), a slightly perturbed minimizer, and a far-off point.
 */
Vector candidate(std::mt19937_64 & rng, const StageQP & qp, const Vector & v_star, int kind);

struct SuiteResult
{
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  /// largest observed value of the suite's checked quantity (scaled to its tolerance)
  double worst = 0.0;
  std::string first_failure;

  bool passed() const { return cases > 0 && failures == 0; }
};

/// Reduced vs full minimizers for arbitrary candidates; IPM and oracle on both sides.
SuiteResult screening_soundness_suite(std::size_t count, std::uint64_t seed);

/// IPM vs oracle, KKT residuals, slack structure and objective consistency.
SuiteResult solver_quality_suite(std::size_t count, std::uint64_t seed);

/// ρ = 1e6 on instances with a feasible hard problem reproduces the hard minimizer.
SuiteResult large_penalty_suite(std::size_t count, std::uint64_t seed);

/// Candidate and minimizer containment in the ellipsoid, and kept-set growth in σ.
SuiteResult ellipsoid_suite(std::size_t count, std::uint64_t seed);

/// Total violation ρᵀε* is non-increasing when all penalties are scaled up.
SuiteResult penalty_monotonicity_suite(std::size_t count, std::uint64_t seed);

struct ScalingPoint
{
  Index n_c = 0;
  double t_screen = 0.0;
};

struct ScalingFit
{
  std::vector<ScalingPoint> points;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Median screening time (slacks, bound, kept set, row extraction) against n_c at fixed n_v.
ScalingFit screening_scaling(const std::vector<Index> & n_cs, Index n_v, int repeats, std::uint64_t seed);

}  // namespace camp::suites
