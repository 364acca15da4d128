#include "camp/config.hpp"
#include "camp/errors.hpp"
#include "camp/harness.hpp"
#include "camp/suites.hpp"
#include "camp/thermal2d.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;

namespace {

enum ExitCode : int { kPass = 0, kAcceptanceFailure = 1, kConfigError = 2, kSolverFailure = 3 };

void write_outputs(const fs::path & out_dir, const camp::ClosedLoopResult & result, camp::Index n_u,
                   const std::optional<camp::Report> & report)
{
  fs::create_directories(out_dir);
  std::ofstream csv(out_dir / "trace.csv");
  camp::write_trace_csv(csv, result, n_u);
  if (report) {
    std::ofstream rep(out_dir / "report.txt");
    camp::write_report(rep, *report);
  }
}

/// Shared tail of `bench` and `run`: write files, print the summary, map to an exit code.
int finish_run(const camp::Scenario & scenario, const camp::ClosedLoopResult & result, const fs::path & out_dir)
{
  std::optional<camp::Report> report;
  if (scenario.mode == camp::Mode::Verify) { report = camp::verify_equivalence(result); }
  write_outputs(out_dir, result, scenario.problem.R.rows(), report);

  std::printf("n_c %lld, steps %zu, mode %s\n", static_cast<long long>(result.n_c), result.steps.size(),
              std::string(camp::to_string(scenario.mode)).c_str());
  camp::Index max_kept = 0;
  for (const auto & step : result.steps) { max_kept = std::max(max_kept, step.n_kept); }
  std::printf("max kept rows %lld\n", static_cast<long long>(max_kept));
  if (report) { camp::write_report(std::cout, *report); }
  std::printf("trace written to %s\n", (out_dir / "trace.csv").string().c_str());

  if (result.failure) {
    std::fprintf(stderr, "solver failure: %s\n", result.failure->c_str());
    return kSolverFailure;
  }
  if (report && !report->pass) { return kAcceptanceFailure; }
  return kPass;
}

int print_suite(const camp::suites::SuiteResult & r)
{
  std::printf("%s %s: %zu cases, %zu failures, worst %.3g of tolerance\n", r.passed() ? "PASS" : "FAIL",
              r.name.c_str(), r.cases, r.failures, r.worst);
  if (!r.first_failure.empty()) { std::printf("  first failure: %s\n", r.first_failure.c_str()); }
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Soft-constrained condensed MPC with online constraint removal"};
  app.require_subcommand(1);

  auto * bench = app.add_subcommand("bench", "Closed-loop benchmark");
  auto * thermal = bench->add_subcommand("thermal", "2D heat transport benchmark");
  bench->require_subcommand(1);
  std::string bench_config;
  std::string bench_mode;
  int bench_steps = 0;
  std::string bench_out;
  int bench_repeats = 0;
  thermal->add_option("--config", bench_config, "JSON configuration file")->check(CLI::ExistingFile);
  thermal->add_option("--mode", bench_mode, "full, reduced or verify");
  thermal->add_option("--steps", bench_steps, "number of closed-loop steps")->check(CLI::PositiveNumber);
  thermal->add_option("--out", bench_out, "output directory");
  thermal->add_option("--repeats", bench_repeats, "timing repeats per step (fastest kept)")
    ->check(CLI::PositiveNumber);

  auto * run = app.add_subcommand("run", "Closed loop on a model given as matrices");
  std::string run_config;
  run->add_option("--config", run_config, "JSON configuration file")->required()->check(CLI::ExistingFile);

  auto * selftest = app.add_subcommand("selftest", "Randomized property suites against the enumeration oracle");
  std::size_t selftest_count = 1000;
  std::uint64_t selftest_seed = 1;
  bool quick = false;
  selftest->add_option("--count", selftest_count, "instances per suite");
  selftest->add_option("--seed", selftest_seed, "RNG seed");
  selftest->add_flag("--quick", quick, "100 instances per suite");

  auto * sweep = app.add_subcommand("sweep-nc", "Screening time against the number of constraints");
  std::vector<camp::Index> sweep_nc{500, 1000, 2000, 4000};
  camp::Index sweep_nv = 15;
  int sweep_repeats = 201;
  std::uint64_t sweep_seed = 7;
  sweep->add_option("--nc", sweep_nc, "constraint counts");
  sweep->add_option("--nv", sweep_nv, "number of decision variables");
  sweep->add_option("--repeats", sweep_repeats, "timed repeats per size (median kept)");
  sweep->add_option("--seed", sweep_seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*thermal) {
      camp::io::BenchConfig cfg;
      if (!bench_config.empty()) { cfg = camp::io::load_bench_config(bench_config); }
      if (!bench_mode.empty()) { cfg.mode = camp::parse_mode(bench_mode); }
      if (bench_steps > 0) { cfg.steps = bench_steps; }
      if (bench_repeats > 0) { cfg.timing_repeats = bench_repeats; }
      if (!bench_out.empty()) { cfg.out_dir = bench_out; }
      const auto benchmark = camp::thermal::build_thermal_benchmark(cfg.thermal);
      const camp::Scenario scenario = camp::io::thermal_scenario(cfg, benchmark);
      const auto result = camp::run_closed_loop(scenario);
      return finish_run(scenario, result, cfg.out_dir);
    }
    if (*run) {
      const camp::io::RunConfig cfg = camp::io::load_run_config(run_config);
      const auto result = camp::run_closed_loop(cfg.scenario);
      return finish_run(cfg.scenario, result, cfg.out_dir);
    }
    if (*selftest) {
      const std::size_t n = quick ? 100 : selftest_count;
      int failed = 0;
      failed += print_suite(camp::suites::screening_soundness_suite(n, selftest_seed));
      failed += print_suite(camp::suites::solver_quality_suite(n, selftest_seed + 1));
      failed += print_suite(camp::suites::large_penalty_suite(n, selftest_seed + 2));
      failed += print_suite(camp::suites::ellipsoid_suite(n, selftest_seed + 3));
      failed += print_suite(camp::suites::penalty_monotonicity_suite(n, selftest_seed + 4));
      return failed == 0 ? kPass : kAcceptanceFailure;
    }
    if (*sweep) {
      const auto fit = camp::suites::screening_scaling(sweep_nc, sweep_nv, sweep_repeats, sweep_seed);
      std::printf("n_c,t_screen_s\n");
      for (const auto & p : fit.points) { std::printf("%lld,%.6e\n", static_cast<long long>(p.n_c), p.t_screen); }
      std::printf("slope %.6e s/row, intercept %.6e s, R^2 %.6f\n", fit.slope, fit.intercept, fit.r2);
      return fit.r2 >= 0.95 ? kPass : kAcceptanceFailure;
    }
  } catch (const camp::ConfigError & e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kConfigError;
  } catch (const camp::DimensionError & e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception & e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kSolverFailure;
  }
  return kPass;
}
