#pragma once

#include "camp/harness.hpp"
#include "camp/thermal2d.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace camp::io {

/**
 * @brief Binary matrix container
 *
 *   bytes 0..7   magic "CAMPMAT1"
 *   bytes 8..15  rows, uint64 little-endian
 *   bytes 16..23 cols, uint64 little-endian
 *   then rows·cols IEEE-754 float64 little-endian values, row-major
 */
void write_matrix(std::ostream & out, const Matrix & m);
Matrix read_matrix(std::istream & in);
void write_matrix(const std::filesystem::path & path, const Matrix & m);
Matrix read_matrix(const std::filesystem::path & path);

/// Settings of `bench thermal`.
struct BenchConfig
{
  thermal::ThermalConfig thermal;
  Mode mode = Mode::Reduced;
  int steps = 60;
  SolverOptions solver;
  ScreenOptions screen;
  int timing_repeats = 1;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
};

BenchConfig parse_bench_config(std::string_view json_text);
BenchConfig load_bench_config(const std::filesystem::path & path);

/// Closed-loop scenario for the thermal benchmark, starting cold with zero input.
Scenario thermal_scenario(const BenchConfig & cfg, const thermal::ThermalBenchmark & bench);

/// Settings of `run`: an explicit model and tracking problem.
struct RunConfig
{
  Scenario scenario;
  std::string out_dir = "out";
};

/// Relative matrix file references resolve against `base_dir`.
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path & base_dir);
RunConfig load_run_config(const std::filesystem::path & path);

}  // namespace camp::io
