#include "camp/config.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace camp::io {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string & what) { throw ConfigError("config: " + what); }

void allow_keys(const json & obj, const char * where, std::initializer_list<const char *> keys)
{
  if (!obj.is_object()) { fail(std::string(where) + " must be an object"); }
  for (const auto & item : obj.items()) {
    bool known = false;
    for (const char * key : keys) { known = known || item.key() == key; }
    if (!known) { fail("unknown key '" + item.key() + "' in " + where); }
  }
}

template <class T>
T get_or(const json & obj, const char * key, T fallback)
{
  if (!obj.contains(key)) { return fallback; }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception & e) {
    fail(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::string read_text(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) { throw ConfigError("cannot open config file " + path.string()); }
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

json parse_json(std::string_view text)
{
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error & e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
}

/// [[...], ...] | {"file": path} | {"identity": n, "scale": s} | {"zeros": [rows, cols]}
Matrix parse_matrix(const json & spec, const std::filesystem::path & base_dir, const char * name)
{
  if (spec.is_array()) {
    const auto rows = static_cast<Index>(spec.size());
    const Index cols = rows ? static_cast<Index>(spec.front().size()) : 0;
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      const json & row = spec[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
        fail(std::string(name) + ": rows must be arrays of equal length");
      }
      for (Index j = 0; j < cols; ++j) { m(i, j) = row[static_cast<std::size_t>(j)].get<double>(); }
    }
    return m;
  }
  if (spec.is_object() && spec.contains("file")) {
    allow_keys(spec, name, {"file"});
    return read_matrix(base_dir / spec.at("file").get<std::string>());
  }
  if (spec.is_object() && spec.contains("identity")) {
    allow_keys(spec, name, {"identity", "scale"});
    const auto n = spec.at("identity").get<Index>();
    return get_or<double>(spec, "scale", 1.0) * Matrix::Identity(n, n);
  }
  if (spec.is_object() && spec.contains("zeros")) {
    allow_keys(spec, name, {"zeros"});
    const auto dims = spec.at("zeros").get<std::vector<Index>>();
    if (dims.size() != 2) { fail(std::string(name) + ": zeros needs [rows, cols]"); }
    return Matrix::Zero(dims[0], dims[1]);
  }
  fail(std::string(name) + ": expected a nested array, {file}, {identity} or {zeros}");
}

/// [...] | {"constant": value, "size": n} | {"file": path} (n×1 container)
Vector parse_vector(const json & spec, const std::filesystem::path & base_dir, const char * name)
{
  if (spec.is_array()) {
    Vector v(static_cast<Index>(spec.size()));
    for (std::size_t i = 0; i < spec.size(); ++i) { v[static_cast<Index>(i)] = spec[i].get<double>(); }
    return v;
  }
  if (spec.is_object() && spec.contains("constant")) {
    allow_keys(spec, name, {"constant", "size"});
    return Vector::Constant(spec.at("size").get<Index>(), spec.at("constant").get<double>());
  }
  if (spec.is_object() && spec.contains("file")) {
    const Matrix m = parse_matrix(spec, base_dir, name);
    if (m.cols() != 1) { fail(std::string(name) + ": vector file must have one column"); }
    return m.col(0);
  }
  fail(std::string(name) + ": expected an array, {constant, size} or {file}");
}

thermal::GaussianSpec parse_gaussian(const json & obj, const char * where, thermal::GaussianSpec spec)
{
  allow_keys(obj, where, {"x", "y", "width", "peak", "floor", "amplitude"});
  spec.x = get_or(obj, "x", spec.x);
  spec.y = get_or(obj, "y", spec.y);
  spec.width = get_or(obj, "width", spec.width);
  spec.peak = get_or(obj, "peak", get_or(obj, "amplitude", spec.peak));
  spec.floor = get_or(obj, "floor", spec.floor);
  return spec;
}

thermal::ThermalConfig parse_thermal(const json & obj)
{
  allow_keys(
    obj, "thermal",
    {"grid", "alpha", "beta", "reaction_sign", "boundary_sign", "dt", "loads", "upper_bound", "output_block",
     "output_nodes", "horizon", "q_scale", "r_scale", "rho_scale", "u_max", "target", "ramp_steps"});
  thermal::ThermalConfig cfg;
  cfg.grid = get_or(obj, "grid", cfg.grid);
  cfg.alpha = get_or(obj, "alpha", cfg.alpha);
  cfg.beta = get_or(obj, "beta", cfg.beta);
  cfg.reaction_sign = get_or(obj, "reaction_sign", cfg.reaction_sign);
  cfg.boundary_sign = get_or(obj, "boundary_sign", cfg.boundary_sign);
  cfg.dt = get_or(obj, "dt", cfg.dt);
  if (obj.contains("loads")) {
    cfg.loads.clear();
    for (const json & load : obj.at("loads")) { cfg.loads.push_back(parse_gaussian(load, "thermal.loads", {0.5, 0.5, 0.1, 1.0, 0.0})); }
  }
  if (obj.contains("upper_bound")) { cfg.upper_bound = parse_gaussian(obj.at("upper_bound"), "thermal.upper_bound", cfg.upper_bound); }
  cfg.output_block = get_or(obj, "output_block", cfg.output_block);
  cfg.output_nodes = get_or(obj, "output_nodes", cfg.output_nodes);
  cfg.horizon = get_or(obj, "horizon", cfg.horizon);
  cfg.q_scale = get_or(obj, "q_scale", cfg.q_scale);
  cfg.r_scale = get_or(obj, "r_scale", cfg.r_scale);
  cfg.rho_scale = get_or(obj, "rho_scale", cfg.rho_scale);
  cfg.u_max = get_or(obj, "u_max", cfg.u_max);
  cfg.target = get_or(obj, "target", cfg.target);
  cfg.ramp_steps = get_or(obj, "ramp_steps", cfg.ramp_steps);
  cfg.validate();
  return cfg;
}

SolverOptions parse_solver(const json & obj)
{
  allow_keys(obj, "solver", {"tol", "max_iterations", "step_fraction"});
  SolverOptions opts;
  opts.tol = get_or(obj, "tol", opts.tol);
  opts.max_iterations = get_or(obj, "max_iterations", opts.max_iterations);
  opts.step_fraction = get_or(obj, "step_fraction", opts.step_fraction);
  if (!(opts.tol > 0.0) || opts.max_iterations < 1 || !(opts.step_fraction > 0.0 && opts.step_fraction < 1.0)) {
    fail("solver options out of range");
  }
  return opts;
}

ScreenOptions parse_screen(const json & obj)
{
  allow_keys(obj, "screen", {"margin"});
  ScreenOptions opts;
  opts.margin = get_or(obj, "margin", opts.margin);
  if (!(opts.margin >= 0.0)) { fail("screen margin must be nonnegative"); }
  return opts;
}

struct ScenarioFields
{
  Mode mode = Mode::Reduced;
  int steps = 60;
  int timing_repeats = 1;
  std::uint64_t seed = 0;
  std::optional<json> x0;
  std::optional<json> u_prev0;
};

ScenarioFields parse_scenario(const json & obj)
{
  allow_keys(obj, "scenario", {"mode", "steps", "timing_repeats", "seed", "x0", "u_prev0"});
  ScenarioFields fields;
  if (obj.contains("mode")) { fields.mode = parse_mode(obj.at("mode").get<std::string>()); }
  fields.steps = get_or(obj, "steps", fields.steps);
  fields.timing_repeats = get_or(obj, "timing_repeats", fields.timing_repeats);
  fields.seed = get_or(obj, "seed", fields.seed);
  if (obj.contains("x0")) { fields.x0 = obj.at("x0"); }
  if (obj.contains("u_prev0")) { fields.u_prev0 = obj.at("u_prev0"); }
  if (fields.steps < 1) { fail("scenario.steps must be >= 1"); }
  if (fields.timing_repeats < 1) { fail("scenario.timing_repeats must be >= 1"); }
  return fields;
}

std::string parse_output(const json & obj, std::string fallback)
{
  allow_keys(obj, "output", {"dir"});
  return get_or(obj, "dir", fallback);
}

ConstraintBlock parse_block(const json & obj, const std::filesystem::path & base_dir, const char * name, Index cols)
{
  ConstraintBlock block;
  if (obj.is_null()) {
    block.M = Matrix::Zero(0, cols);
    block.g = Vector::Zero(0);
    block.rho = Vector::Zero(0);
    return block;
  }
  allow_keys(obj, name, {"M", "g", "rho"});
  block.M = parse_matrix(obj.at("M"), base_dir, name);
  block.g = parse_vector(obj.at("g"), base_dir, name);
  if (!obj.contains("rho")) {
    block.rho = Vector::Ones(block.rows());
  } else if (obj.at("rho").is_number()) {
    block.rho = Vector::Constant(block.rows(), obj.at("rho").get<double>());
  } else {
    block.rho = parse_vector(obj.at("rho"), base_dir, name);
  }
  return block;
}

/// {"type": "constant", "value": [...]} | {"type": "ramp", "target": [...], "steps": n}
/// | {"type": "sequence", "values": [[...], ...]} (last value held)
ReferenceWindow parse_reference(const json & obj, int horizon, Index n_y)
{
  allow_keys(obj, "tracking.reference", {"type", "value", "target", "steps", "values"});
  const auto type = get_or<std::string>(obj, "type", "constant");
  std::function<Vector(int)> at;
  if (type == "constant") {
    const Vector value = parse_vector(obj.at("value"), {}, "reference.value");
    at = [value](int) { return value; };
  } else if (type == "ramp") {
    const Vector target = parse_vector(obj.at("target"), {}, "reference.target");
    const int steps = get_or(obj, "steps", 1);
    if (steps < 1) { fail("reference ramp steps must be >= 1"); }
    at = [target, steps](int k) { return Vector(target * std::clamp(static_cast<double>(k) / steps, 0.0, 1.0)); };
  } else if (type == "sequence") {
    std::vector<Vector> values;
    for (const json & v : obj.at("values")) { values.push_back(parse_vector(v, {}, "reference.values")); }
    if (values.empty()) { fail("reference sequence is empty"); }
    at = [values](int k) { return values[std::min<std::size_t>(static_cast<std::size_t>(std::max(k, 0)), values.size() - 1)]; };
  } else {
    fail("unknown reference type '" + type + "'");
  }
  for (int k = 0; k <= horizon; ++k) {
    if (at(k).size() != n_y) { fail("reference length does not match the number of outputs"); }
  }
  return [at, horizon](int k) {
    std::vector<Vector> window;
    for (int i = 1; i <= horizon; ++i) { window.push_back(at(k + i)); }
    return window;
  };
}

}  // namespace

static BenchConfig parse_bench_config_impl(std::string_view json_text)
{
  const json root = parse_json(json_text);
  allow_keys(root, "config", {"thermal", "scenario", "solver", "screen", "output"});
  BenchConfig cfg;
  if (root.contains("thermal")) { cfg.thermal = parse_thermal(root.at("thermal")); }
  if (root.contains("solver")) { cfg.solver = parse_solver(root.at("solver")); }
  if (root.contains("screen")) { cfg.screen = parse_screen(root.at("screen")); }
  if (root.contains("output")) { cfg.out_dir = parse_output(root.at("output"), cfg.out_dir); }
  if (root.contains("scenario")) {
    const ScenarioFields fields = parse_scenario(root.at("scenario"));
    if (fields.x0 || fields.u_prev0) { fail("bench scenarios always start from x0 = 0, u_prev0 = 0"); }
    cfg.mode = fields.mode;
    cfg.steps = fields.steps;
    cfg.timing_repeats = fields.timing_repeats;
    cfg.seed = fields.seed;
  }
  return cfg;
}

BenchConfig parse_bench_config(std::string_view json_text)
{
  try {
    return parse_bench_config_impl(json_text);
  } catch (const json::exception & e) {
    fail(std::string("malformed value: ") + e.what());
  }
}

BenchConfig load_bench_config(const std::filesystem::path & path) { return parse_bench_config(read_text(path)); }

Scenario thermal_scenario(const BenchConfig & cfg, const thermal::ThermalBenchmark & bench)
{
  Scenario scenario;
  scenario.model = bench.model;
  scenario.problem = bench.problem;
  scenario.reference = [bench](int k) { return bench.reference_window(k); };
  scenario.steps = cfg.steps;
  scenario.x0 = Vector::Zero(bench.model.n_x());
  scenario.u_prev0 = Vector::Zero(bench.model.n_u());
  scenario.mode = cfg.mode;
  scenario.solver = cfg.solver;
  scenario.screen = cfg.screen;
  scenario.timing_repeats = cfg.timing_repeats;
  scenario.seed = cfg.seed;
  return scenario;
}

static RunConfig parse_run_config_impl(std::string_view json_text, const std::filesystem::path & base_dir)
{
  const json root = parse_json(json_text);
  allow_keys(root, "config", {"model", "tracking", "scenario", "solver", "screen", "output"});
  if (!root.contains("model") || !root.contains("tracking")) { fail("run configs need 'model' and 'tracking'"); }

  RunConfig cfg;
  Scenario & scenario = cfg.scenario;

  const json & model = root.at("model");
  allow_keys(model, "model", {"A", "B", "C", "D"});
  scenario.model.A = parse_matrix(model.at("A"), base_dir, "model.A");
  scenario.model.B = parse_matrix(model.at("B"), base_dir, "model.B");
  scenario.model.C = parse_matrix(model.at("C"), base_dir, "model.C");
  scenario.model.D = model.contains("D") ? parse_matrix(model.at("D"), base_dir, "model.D")
                                         : Matrix::Zero(scenario.model.C.rows(), scenario.model.B.cols());

  const json & tracking = root.at("tracking");
  allow_keys(tracking, "tracking", {"Q", "R", "horizon", "state", "input", "rate", "reference"});
  TrackingProblem & prob = scenario.problem;
  prob.Q = parse_matrix(tracking.at("Q"), base_dir, "tracking.Q");
  prob.R = parse_matrix(tracking.at("R"), base_dir, "tracking.R");
  prob.horizon = get_or(tracking, "horizon", 1);
  const Index nx = scenario.model.A.rows(), nu = scenario.model.B.cols();
  prob.state = parse_block(tracking.value("state", json()), base_dir, "tracking.state", nx);
  prob.input = parse_block(tracking.value("input", json()), base_dir, "tracking.input", nu);
  prob.rate = parse_block(tracking.value("rate", json()), base_dir, "tracking.rate", nu);
  if (prob.horizon < 1) { fail("tracking.horizon must be >= 1"); }
  if (!tracking.contains("reference")) { fail("tracking.reference is required"); }
  scenario.reference = parse_reference(tracking.at("reference"), prob.horizon, scenario.model.C.rows());

  const ScenarioFields fields = root.contains("scenario") ? parse_scenario(root.at("scenario")) : ScenarioFields{};
  scenario.mode = fields.mode;
  scenario.steps = fields.steps;
  scenario.timing_repeats = fields.timing_repeats;
  scenario.seed = fields.seed;
  scenario.x0 = fields.x0 ? parse_vector(*fields.x0, base_dir, "scenario.x0") : Vector::Zero(nx);
  scenario.u_prev0 = fields.u_prev0 ? parse_vector(*fields.u_prev0, base_dir, "scenario.u_prev0") : Vector::Zero(nu);
  if (root.contains("solver")) { scenario.solver = parse_solver(root.at("solver")); }
  if (root.contains("screen")) { scenario.screen = parse_screen(root.at("screen")); }
  if (root.contains("output")) { cfg.out_dir = parse_output(root.at("output"), cfg.out_dir); }
  scenario.validate();
  return cfg;
}

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path & base_dir)
{
  try {
    return parse_run_config_impl(json_text, base_dir);
  } catch (const json::exception & e) {
    fail(std::string("malformed value: ") + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path & path)
{
  return parse_run_config(read_text(path), path.parent_path());
}

}  // namespace camp::io
