#pragma once

#include "camp/condenser.hpp"
#include "camp/screener.hpp"
#include "camp/soft_qp.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace camp {

enum class Mode { Full, Reduced, Verify };

std::string_view to_string(Mode mode);
/// Throws ConfigError on anything but "full", "reduced" or "verify".
Mode parse_mode(std::string_view text);

/// y_ref(k+1), ..., y_ref(k+N) for the problem solved at step k.
using ReferenceWindow = std::function<std::vector<Vector>(int k)>;

struct Scenario
{
  StateSpaceModel model;
  TrackingProblem problem;
  ReferenceWindow reference;
  int steps = 60;
  Vector x0;
  Vector u_prev0;
  Mode mode = Mode::Reduced;
  SolverOptions solver;
  ScreenOptions screen;
  /// Each timed section is run this many times and the fastest run is kept.
  int timing_repeats = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct StepTrace
{
  int k = 0;
  Index n_kept = 0;
  /// screening time (candidate slacks, bound, kept set, extraction); empty in full mode
  std::optional<double> t_screen;
  double t_solve = 0.0;
  std::optional<double> t_solve_full;
  /// ‖v*_reduced − v*_full‖∞ (verify mode)
  std::optional<double> dev_inf;
  std::optional<double> v_full_inf;
  /// objective ½vᵀHv + vᵀFz + ρᵀε of the applied minimizer on the full problem
  double objective = 0.0;
  double y_max = 0.0;
  /// ρᵀε* on the full problem
  double eps_penalty = 0.0;
  Vector u;

  /// largest W_j v* − c_j − L_j z over removed rows (−inf if none removed)
  double removed_excess = 0.0;
  /// σ vanished; the unconstrained minimizer was applied without a QP solve
  bool trivial = false;
  int iterations = 0;
  std::array<Index, 3> kept_by_kind{0, 0, 0};
  std::vector<Index> kept_rows;
};

struct ClosedLoopResult
{
  std::vector<StepTrace> steps;
  Index n_c = 0;
  /// set when a solve failed; `steps` then holds the trace up to the failure
  std::optional<std::string> failure;
  std::vector<Vector> states;
};

/// Runs the receding-horizon loop of the constraint-adaptive controller.
ClosedLoopResult run_closed_loop(const Scenario & scenario);
ClosedLoopResult run_closed_loop(const Scenario & scenario, const CondensedQP & cqp);

struct EquivalenceThresholds
{
  /// ‖v_red − v_full‖∞ ≤ dev_rel·(1 + ‖v_full‖∞)
  double dev_rel = 1e-6;
  /// W_j v* − c_j − L_j z ≤ removed_excess on every removed row
  double removed_excess = 1e-7;
};

struct Report
{
  Index n_c = 0;
  std::size_t steps = 0;
  double max_dev = 0.0;
  double median_dev = 0.0;
  /// max over steps of dev / (1 + ‖v_full‖∞)
  double max_scaled_dev = 0.0;
  double max_removed_excess = 0.0;
  Index max_kept = 0;
  int peak_step = 0;
  double max_kept_fraction = 0.0;
  double mean_kept_fraction = 0.0;
  double median_t_full = 0.0;
  double median_t_reduced = 0.0;
  double speedup = 0.0;
  bool has_full_solves = false;
  bool pass = false;
};

/// Summary of a verify-mode trace; the warm-up step k = 0 is left out of timing medians.
Report verify_equivalence(const ClosedLoopResult & trace, const EquivalenceThresholds & thresholds = {});

void write_report(std::ostream & out, const Report & report);

/// Trace CSV: k, n_kept, t_screen_s, t_solve_s, t_solve_full_s, dev_inf, objective,
/// y_max, eps_penalty, u_0..u_{n_u−1}. Missing values are written as empty fields.
void write_trace_csv(std::ostream & out, const ClosedLoopResult & trace, Index n_u);

}  // namespace camp
