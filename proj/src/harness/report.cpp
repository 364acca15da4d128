#include "camp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace camp {
namespace {

double median(std::vector<double> values)
{
  if (values.empty()) { return 0.0; }
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) { return *mid; }
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

/// Shortest text that reads back to the same double.
std::string format_number(double value)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

Report verify_equivalence(const ClosedLoopResult & trace, const EquivalenceThresholds & thresholds)
{
  Report report;
  report.n_c = trace.n_c;
  report.steps = trace.steps.size();
  report.has_full_solves = !trace.steps.empty();

  bool devs_ok = true;
  bool removed_ok = true;
  std::vector<double> devs, t_full, t_reduced;
  double kept_sum = 0.0;
  report.max_removed_excess = -std::numeric_limits<double>::infinity();

  for (const StepTrace & step : trace.steps) {
    if (step.n_kept > report.max_kept) {
      report.max_kept = step.n_kept;
      report.peak_step = step.k;
    }
    kept_sum += static_cast<double>(step.n_kept);
    report.max_removed_excess = std::max(report.max_removed_excess, step.removed_excess);
    removed_ok = removed_ok && step.removed_excess <= thresholds.removed_excess;

    if (step.dev_inf && step.v_full_inf) {
      devs.push_back(*step.dev_inf);
      report.max_dev = std::max(report.max_dev, *step.dev_inf);
      const double scaled = *step.dev_inf / (1.0 + *step.v_full_inf);
      report.max_scaled_dev = std::max(report.max_scaled_dev, scaled);
      devs_ok = devs_ok && *step.dev_inf <= thresholds.dev_rel * (1.0 + *step.v_full_inf);
    } else {
      report.has_full_solves = false;
    }

    // warm-up step excluded from timing medians
    if (step.k == 0 && trace.steps.size() > 1) { continue; }
    if (step.t_solve_full) { t_full.push_back(*step.t_solve_full); }
    t_reduced.push_back(step.t_screen.value_or(0.0) + step.t_solve);
  }

  if (report.n_c > 0 && !trace.steps.empty()) {
    report.max_kept_fraction = static_cast<double>(report.max_kept) / static_cast<double>(report.n_c);
    report.mean_kept_fraction = kept_sum / static_cast<double>(trace.steps.size() * static_cast<std::size_t>(report.n_c));
  }
  report.median_dev = median(devs);
  report.median_t_full = median(t_full);
  report.median_t_reduced = median(t_reduced);
  report.speedup = report.median_t_reduced > 0.0 ? report.median_t_full / report.median_t_reduced : 0.0;
  report.pass = !trace.failure && report.has_full_solves && devs_ok && removed_ok;
  return report;
}

void write_report(std::ostream & out, const Report & report)
{
  out << "steps                 " << report.steps << "\n"
      << "constraints           " << report.n_c << "\n"
      << "max kept              " << report.max_kept << " (step " << report.peak_step << ", "
      << 100.0 * report.max_kept_fraction << "%)\n"
      << "mean kept fraction    " << 100.0 * report.mean_kept_fraction << "%\n"
      << "max deviation         " << report.max_dev << "\n"
      << "median deviation      " << report.median_dev << "\n"
      << "max scaled deviation  " << report.max_scaled_dev << "\n"
      << "max removed excess    " << report.max_removed_excess << "\n"
      << "median t full [s]     " << report.median_t_full << "\n"
      << "median t reduced [s]  " << report.median_t_reduced << "\n"
      << "speedup               " << report.speedup << "\n"
      << "equivalence           " << (report.pass ? "PASS" : "FAIL") << "\n";
}

void write_trace_csv(std::ostream & out, const ClosedLoopResult & trace, Index n_u)
{
  out << "k,n_kept,t_screen_s,t_solve_s,t_solve_full_s,dev_inf,objective,y_max,eps_penalty";
  for (Index i = 0; i < n_u; ++i) { out << ",u_" << i; }
  out << "\n";

  auto optional_field = [&](const std::optional<double> & value) {
    out << ',';
    if (value) { out << format_number(*value); }
  };
  for (const StepTrace & step : trace.steps) {
    out << step.k << ',' << step.n_kept;
    optional_field(step.t_screen);
    out << ',' << format_number(step.t_solve);
    optional_field(step.t_solve_full);
    optional_field(step.dev_inf);
    out << ',' << format_number(step.objective) << ',' << format_number(step.y_max) << ','
        << format_number(step.eps_penalty);
    for (Index i = 0; i < n_u; ++i) {
      out << ',';
      if (i < step.u.size()) { out << format_number(step.u[i]); }
    }
    out << "\n";
  }
}

}  // namespace camp
