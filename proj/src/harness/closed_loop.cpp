#include "camp/harness.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace camp {
namespace {

/// Runs `body` `repeats` times and returns the fastest wall time in seconds.
template <class Body>
double time_min(int repeats, Body && body)
{
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(repeats, 1); ++r) {
    const auto start = std::chrono::steady_clock::now();
    body();
    const auto stop = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(stop - start).count());
  }
  return best;
}

double inf_norm(const Vector & x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

std::string_view to_string(Mode mode)
{
  switch (mode) {
    case Mode::Full: return "full";
    case Mode::Reduced: return "reduced";
    case Mode::Verify: return "verify";
  }
  return "unknown";
}

Mode parse_mode(std::string_view text)
{
  if (text == "full") { return Mode::Full; }
  if (text == "reduced") { return Mode::Reduced; }
  if (text == "verify") { return Mode::Verify; }
  throw ConfigError("unknown mode '" + std::string(text) + "' (expected full, reduced or verify)");
}

void Scenario::validate() const
{
  if (steps < 1) { throw ConfigError("scenario: steps must be >= 1"); }
  if (timing_repeats < 1) { throw ConfigError("scenario: timing_repeats must be >= 1"); }
  if (!reference) { throw ConfigError("scenario: reference is not set"); }
  if (x0.size() != model.n_x()) { throw ConfigError("scenario: x0 has the wrong length"); }
  if (u_prev0.size() != model.n_u()) { throw ConfigError("scenario: u_prev0 has the wrong length"); }
}

ClosedLoopResult run_closed_loop(const Scenario & scenario)
{
  scenario.validate();
  return run_closed_loop(scenario, condense(scenario.model, scenario.problem));
}

ClosedLoopResult run_closed_loop(const Scenario & scenario, const CondensedQP & cqp)
{
  scenario.validate();
  const SoftQP & qp = cqp.qp;
  const ScreenerCache cache = precompute_row_norms(qp);
  const int repeats = scenario.timing_repeats;

  ClosedLoopResult out;
  out.n_c = qp.n_c();
  Vector x = scenario.x0;
  Vector u_prev = scenario.u_prev0;
  std::optional<Vector> previous_v;
  out.states.push_back(x);

  for (int k = 0; k < scenario.steps; ++k) {
    StepTrace step;
    step.k = k;
    step.y_max = scenario.model.n_y() ? (scenario.model.C * x).maxCoeff() : 0.0;

    const Vector z = assemble_z(cqp.layout, x, u_prev, scenario.reference(k));
    const StageQP stage = qp.at(z);

    SolveResult applied;
    if (scenario.mode == Mode::Full) {
      step.t_solve = time_min(repeats, [&] { applied = solve_soft_qp(stage, scenario.solver); });
      step.n_kept = qp.n_c();
      step.removed_excess = -std::numeric_limits<double>::infinity();
      step.iterations = applied.iterations;
      step.kept_by_kind = {0, 0, 0};
    } else {
      const Vector v_tilde =
        previous_v ? shift_warm_start(previous_v, cqp, z) : Vector(-stage.hessian().solve(stage.f()));

      KeptSet kept;
      bool trivial = false;
      std::optional<StageQP> reduced;
      step.t_screen = time_min(repeats, [&] {
        ScreenOutcome outcome = screen_candidate(cache, v_tilde, stage, scenario.screen);
        kept = std::move(outcome.kept);
        trivial = outcome.trivial;
        reduced.emplace(stage.select_rows(kept.rows));
      });

      SolveResult reduced_result;
      if (trivial) {
        // unconstrained minimizer
        step.t_solve = time_min(repeats, [&] { reduced_result.v_star = -stage.hessian().solve(stage.f()); });
        reduced_result.eps_star = Vector::Zero(0);
        reduced_result.status = SolveStatus::Optimal;
        reduced_result.iterations = 0;
      } else {
        step.t_solve = time_min(repeats, [&] { reduced_result = solve_soft_qp(*reduced, scenario.solver); });
      }
      step.trivial = trivial;
      step.iterations = reduced_result.iterations;
      step.n_kept = kept.size();
      step.kept_rows = kept.rows;
      step.kept_by_kind = count_by_kind(kept, cqp.origin);

      if (reduced_result.status != SolveStatus::Optimal) {
        std::ostringstream msg;
        msg << "step " << k << ": reduced solve ended with status " << to_string(reduced_result.status);
        out.failure = msg.str();
        break;
      }

      const Vector excess = stage.W() * reduced_result.v_star - stage.d();
      step.removed_excess = -std::numeric_limits<double>::infinity();
      auto next_kept = kept.rows.begin();
      for (Index j = 0; j < qp.n_c(); ++j) {
        if (next_kept != kept.rows.end() && *next_kept == j) {
          ++next_kept;
          continue;
        }
        step.removed_excess = std::max(step.removed_excess, excess[j]);
      }
      applied = expand_solution(reduced_result, kept, stage, std::numeric_limits<double>::infinity());

      if (scenario.mode == Mode::Verify) {
        SolveResult full;
        step.t_solve_full = time_min(repeats, [&] { full = solve_soft_qp(stage, scenario.solver); });
        if (full.status != SolveStatus::Optimal) {
          std::ostringstream msg;
          msg << "step " << k << ": full solve ended with status " << to_string(full.status);
          out.failure = msg.str();
          break;
        }
        step.dev_inf = inf_norm(applied.v_star - full.v_star);
        step.v_full_inf = inf_norm(full.v_star);
      }
    }

    if (applied.status != SolveStatus::Optimal) {
      std::ostringstream msg;
      msg << "step " << k << ": solve ended with status " << to_string(applied.status);
      out.failure = msg.str();
      break;
    }

    step.objective = applied.objective;
    step.eps_penalty = stage.rho().dot(applied.eps_star);
    step.u = extract_input(applied.v_star, u_prev);

    x = scenario.model.A * x + scenario.model.B * step.u;
    u_prev = step.u;
    previous_v = applied.v_star;
    out.states.push_back(x);
    out.steps.push_back(std::move(step));
  }
  return out;
}

}  // namespace camp
