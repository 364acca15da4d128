#include "camp/thermal2d.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace camp::thermal {
namespace {

void fail(const std::string & what) { throw ConfigError("thermal config: " + what); }

}  // namespace

void ThermalConfig::validate() const
{
  if (grid < 3) { fail("grid must have at least 3 nodes per side"); }
  if (!(dt > 0.0)) { fail("dt must be positive"); }
  if (!(alpha >= 0.0)) { fail("alpha must be nonnegative"); }
  if (loads.empty()) { fail("at least one load field is required"); }
  for (const auto & load : loads) {
    if (!(load.width > 0.0)) { fail("load widths must be positive"); }
  }
  if (!(upper_bound.width > 0.0)) { fail("bound width must be positive"); }
  if (output_nodes.empty() && (output_block < 1 || output_block > grid)) { fail("output block must fit the grid"); }
  for (const Index node : output_nodes) {
    if (node < 0 || node >= static_cast<Index>(grid) * grid) { fail("output node outside the grid"); }
  }
  if (horizon < 1) { fail("horizon must be >= 1"); }
  if (!(q_scale >= 0.0)) { fail("q_scale must be nonnegative"); }
  if (!(r_scale > 0.0)) { fail("r_scale must be positive"); }
  if (!(rho_scale > 0.0)) { fail("rho_scale must be positive"); }
  if (!(u_max > 0.0)) { fail("u_max must be positive"); }
  if (ramp_steps < 1) { fail("ramp_steps must be >= 1"); }
}

std::vector<Index> ThermalConfig::outputs() const
{
  if (!output_nodes.empty()) { return output_nodes; }
  std::vector<Index> nodes;
  const int start = (grid - output_block) / 2;
  for (int i = start; i < start + output_block; ++i) {
    for (int j = start; j < start + output_block; ++j) { nodes.push_back(node_index(grid, i, j)); }
  }
  return nodes;
}

Vector gaussian_field(int grid, const GaussianSpec & spec)
{
  if (grid < 2) { throw ConfigError("gaussian_field: grid must have at least 2 nodes per side"); }
  if (!(spec.width > 0.0)) { throw ConfigError("gaussian_field: width must be positive"); }
  const double h = 1.0 / (grid - 1);
  Vector field(static_cast<Index>(grid) * grid);
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double dx = j * h - spec.x;
      const double dy = i * h - spec.y;
      const double r2 = dx * dx + dy * dy;
      field[node_index(grid, i, j)] =
        spec.floor + (spec.peak - spec.floor) * std::exp(-r2 / (2.0 * spec.width * spec.width));
    }
  }
  return field;
}

ContinuousModel build_laplacian(const ThermalConfig & cfg)
{
  cfg.validate();
  const int n = cfg.grid;
  const Index nx = static_cast<Index>(n) * n;
  const double h = cfg.spacing();

  ContinuousModel model;
  model.A = cfg.reaction_sign * cfg.beta * Matrix::Identity(nx, nx);

  if (cfg.alpha > 0.0) {
    const double k = cfg.alpha / (h * h);
    // A boundary node's missing neighbor is a ghost node eliminated through
    // α(T_ghost − T_mirror)/(2h) = s·T, i.e. T_ghost = T_mirror + 2hsT/α.
    const double ghost_self = 2.0 * cfg.boundary_sign / h;
    const int di[4] = {-1, 1, 0, 0};
    const int dj[4] = {0, 0, -1, 1};
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Index p = node_index(n, i, j);
        for (int dir = 0; dir < 4; ++dir) {
          const int ni = i + di[dir], nj = j + dj[dir];
          model.A(p, p) -= k;
          if (ni >= 0 && ni < n && nj >= 0 && nj < n) {
            model.A(p, node_index(n, ni, nj)) += k;
          } else {
            model.A(p, node_index(n, i - di[dir], j - dj[dir])) += k;
            model.A(p, p) += ghost_self;
          }
        }
      }
    }
  }

  model.B.resize(nx, static_cast<Index>(cfg.loads.size()));
  for (std::size_t l = 0; l < cfg.loads.size(); ++l) {
    model.B.col(static_cast<Index>(l)) = gaussian_field(n, cfg.loads[l]);
  }
  return model;
}

DiscreteModel discretize_zoh(const Matrix & A, const Matrix & B, double dt)
{
  require_dim(A.cols(), A.rows(), "discretize_zoh A (square)");
  require_dim(B.rows(), A.rows(), "discretize_zoh B rows");
  if (!(dt > 0.0)) { throw ConfigError("discretize_zoh: dt must be positive"); }

  const Index nx = A.rows(), nu = B.cols();
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(nx + nu, nx + nu);
  block.topLeftCorner(nx, nx) = A * dt;
  block.topRightCorner(nx, nu) = B * dt;
  const Eigen::MatrixXd expo = block.exp();
  if (!expo.allFinite()) { throw std::runtime_error("discretize_zoh: matrix exponential did not converge"); }

  return DiscreteModel{expo.topLeftCorner(nx, nx), expo.topRightCorner(nx, nu)};
}

Vector ThermalBenchmark::reference(int k) const
{
  const double ramp = std::clamp(static_cast<double>(k) / config.ramp_steps, 0.0, 1.0);
  return Vector::Constant(model.n_y(), config.target * ramp);
}

std::vector<Vector> ThermalBenchmark::reference_window(int k) const
{
  std::vector<Vector> window;
  window.reserve(static_cast<std::size_t>(problem.horizon));
  for (int i = 1; i <= problem.horizon; ++i) { window.push_back(reference(k + i)); }
  return window;
}

ThermalBenchmark build_thermal_benchmark(const ThermalConfig & cfg)
{
  cfg.validate();
  const ContinuousModel continuous = build_laplacian(cfg);
  DiscreteModel discrete = discretize_zoh(continuous.A, continuous.B, cfg.dt);

  const Index nx = discrete.A.rows();
  const Index nu = discrete.B.cols();
  const std::vector<Index> outputs = cfg.outputs();
  const auto ny = static_cast<Index>(outputs.size());

  ThermalBenchmark bench;
  bench.config = cfg;
  bench.model.A = std::move(discrete.A);
  bench.model.B = std::move(discrete.B);
  bench.model.C = Matrix::Zero(ny, nx);
  for (Index r = 0; r < ny; ++r) { bench.model.C(r, outputs[static_cast<std::size_t>(r)]) = 1.0; }
  bench.model.D = Matrix::Zero(ny, nu);

  bench.upper_bound = gaussian_field(cfg.grid, cfg.upper_bound);

  TrackingProblem & prob = bench.problem;
  prob.Q = cfg.q_scale * Matrix::Identity(ny, ny);
  prob.R = cfg.r_scale * Matrix::Identity(nu, nu);
  prob.horizon = cfg.horizon;

  prob.state.M = Matrix::Identity(nx, nx);
  prob.state.g = bench.upper_bound;
  prob.state.rho = Vector::Constant(nx, cfg.rho_scale);

  // uⱼ ≤ u_max and −uⱼ ≤ 0, interleaved per input
  prob.input.M = Matrix::Zero(2 * nu, nu);
  prob.input.g = Vector::Zero(2 * nu);
  for (Index j = 0; j < nu; ++j) {
    prob.input.M(2 * j, j) = 1.0;
    prob.input.M(2 * j + 1, j) = -1.0;
    prob.input.g[2 * j] = cfg.u_max;
  }
  prob.input.rho = Vector::Constant(2 * nu, cfg.rho_scale);

  prob.rate.M = Matrix::Zero(0, nu);
  prob.rate.g = Vector::Zero(0);
  prob.rate.rho = Vector::Zero(0);
  return bench;
}

}  // namespace camp::thermal
