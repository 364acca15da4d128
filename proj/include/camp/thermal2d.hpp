#pragma once

#include "camp/condenser.hpp"

#include <vector>

namespace camp::thermal {

/// Gaussian bump on the unit square.
struct GaussianSpec
{
  double x = 0.5;
  double y = 0.5;
  double width = 0.1;
  double peak = 1.0;
  double floor = 0.0;
};

/**
 * @brief Heat transport benchmark on Ω = [0, 1]²
 *
 *   Ṫ = α∇²T + s_β β T + Σⱼ γⱼ uⱼ,   α∇T·n = s_b T on ∂Ω,
 *
 * discretized on a `grid` × `grid` node-centered mesh, sampled with zero-order
 * hold, and wrapped in a velocity-form tracking problem with temperature upper
 * bounds at every node and 0 ≤ uⱼ ≤ u_max.
 */
struct ThermalConfig
{
  int grid = 20;
  double alpha = 2.5e-4;
  double beta = 2e-2;
  /// −1 makes βT a damping term
  double reaction_sign = -1.0;
  /// −1 is the dissipative boundary α∇T·n = −T
  double boundary_sign = -1.0;
  double dt = 1.0;

  std::vector<GaussianSpec> loads = {
    {0.3, 0.5, 0.12, 1.0, 0.0},
    {0.5, 0.5, 0.12, 1.0, 0.0},
    {0.7, 0.5, 0.12, 1.0, 0.0},
  };
  GaussianSpec upper_bound{0.5, 0.5, 0.3, 12.0, 2.0};

  /// side of the centered square block of output nodes (ignored if output_nodes is set)
  int output_block = 5;
  /// explicit row-major node indices of the outputs
  std::vector<Index> output_nodes;

  int horizon = 5;
  double q_scale = 1.0;
  double r_scale = 1.0;
  double rho_scale = 1.0;
  double u_max = 1.0;

  double target = 10.0;
  int ramp_steps = 30;

  void validate() const;
  double spacing() const { return 1.0 / (grid - 1); }
  std::vector<Index> outputs() const;
};

/// Row-major node index of (row i along y, column j along x).
inline Index node_index(int grid, int i, int j) { return static_cast<Index>(i) * grid + j; }

struct ContinuousModel
{
  Matrix A;
  Matrix B;
};

struct DiscreteModel
{
  Matrix A;
  Matrix B;
};

/// α·(5-point Laplacian with ghost-node boundary) + s_β β I, and the load fields as columns of B.
ContinuousModel build_laplacian(const ThermalConfig & cfg);

/// Exact zero-order hold: exp([[A, B], [0, 0]]·dt) = [[A_d, B_d], [0, I]].
DiscreteModel discretize_zoh(const Matrix & A, const Matrix & B, double dt);

/// floor + (peak − floor)·exp(−‖r − center‖² / (2 width²)) at every node.
Vector gaussian_field(int grid, const GaussianSpec & spec);

struct ThermalBenchmark
{
  ThermalConfig config;
  StateSpaceModel model;
  TrackingProblem problem;
  Vector upper_bound;

  /// y_ref(k) = 1·min(target, target·k/ramp_steps)
  Vector reference(int k) const;
  /// y_ref(k+1), ..., y_ref(k+N)
  std::vector<Vector> reference_window(int k) const;
};

ThermalBenchmark build_thermal_benchmark(const ThermalConfig & cfg);

}  // namespace camp::thermal
