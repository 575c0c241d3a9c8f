#include "lpwave/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "lpwave/errors.hpp"

namespace lpwave {

using nlohmann::json;

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "partition", "bernstein", "mollifier", "lz-characterization",
      "kernel-bounds", "remainder", "positivity", "commutator"};
  return names;
}

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw SchemaError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw SchemaError(join(path, key), "unknown field");
  }
}

double number(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw SchemaError(join(path, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw SchemaError(join(path, key), "must be finite");
  return x;
}

long long integer(const json& obj, const std::string& path, const char* key, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw SchemaError(join(path, key), "expected an integer");
  return v.get<long long>();
}

std::string text(const json& obj, const std::string& path, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw SchemaError(join(path, key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& obj, const std::string& path, const char* key,
                            std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array()) throw SchemaError(join(path, key), "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      throw SchemaError(join(path, key) + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::vector<int> integers(const json& obj, const std::string& path, const char* key,
                          std::vector<int> fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array()) throw SchemaError(join(path, key), "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer())
      throw SchemaError(join(path, key) + "[" + std::to_string(i) + "]", "expected an integer");
    out.push_back(v[i].get<int>());
  }
  return out;
}

TimeRegularity time_kind(const std::string& s, const std::string& path) {
  if (s == "none") return TimeRegularity::none;
  if (s == "log_zygmund") return TimeRegularity::log_zygmund;
  if (s == "lipschitz") return TimeRegularity::lipschitz;
  throw SchemaError(path, "expected one of none, log_zygmund, lipschitz");
}

SpaceRegularity space_kind(const std::string& s, const std::string& path) {
  if (s == "none") return SpaceRegularity::none;
  if (s == "log_lipschitz") return SpaceRegularity::log_lipschitz;
  if (s == "lipschitz") return SpaceRegularity::lipschitz;
  throw SchemaError(path, "expected one of none, log_lipschitz, lipschitz");
}

std::string name_of(TimeRegularity k) {
  switch (k) {
    case TimeRegularity::none: return "none";
    case TimeRegularity::log_zygmund: return "log_zygmund";
    case TimeRegularity::lipschitz: return "lipschitz";
  }
  return "none";
}

std::string name_of(SpaceRegularity k) {
  switch (k) {
    case SpaceRegularity::none: return "none";
    case SpaceRegularity::log_lipschitz: return "log_lipschitz";
    case SpaceRegularity::lipschitz: return "lipschitz";
  }
  return "none";
}

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw SchemaError(path, message);
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  check_keys(j, "", {"name", "seed", "grid", "coefficients", "data", "solver", "energy", "suites", "output"});
  ExperimentConfig c;
  c.name = text(j, "", "name", c.name);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw SchemaError("seed", "expected a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    check_keys(g, "grid", {"dim", "points"});
    c.grid.dim = static_cast<int>(integer(g, "grid", "dim", c.grid.dim));
    c.grid.points = static_cast<int>(integer(g, "grid", "points", c.grid.points));
  }
  auto& p = c.coefficients;
  if (j.contains("coefficients")) {
    const auto& q = j.at("coefficients");
    const std::string path = "coefficients";
    check_keys(q, path, {"base", "amplitude", "time_kind", "time_depth", "space_kind", "space_depth",
                         "mixed_amplitude", "t_begin", "t_end"});
    const auto base = numbers(q, path, "base", {p.base[0], p.base[1], p.base[2]});
    require(base.size() == 3, join(path, "base"), "expected [a11, a12, a22]");
    p.base = {base[0], base[1], base[2]};
    p.amplitude = number(q, path, "amplitude", p.amplitude);
    p.time_kind = time_kind(text(q, path, "time_kind", name_of(p.time_kind)), join(path, "time_kind"));
    p.time_depth = static_cast<int>(integer(q, path, "time_depth", p.time_depth));
    p.space_kind = space_kind(text(q, path, "space_kind", name_of(p.space_kind)), join(path, "space_kind"));
    p.space_depth = static_cast<int>(integer(q, path, "space_depth", p.space_depth));
    p.mixed_amplitude = number(q, path, "mixed_amplitude", p.mixed_amplitude);
    p.t_begin = number(q, path, "t_begin", p.t_begin);
    p.t_end = number(q, path, "t_end", p.t_end);
  }
  if (j.contains("data")) {
    const auto& d = j.at("data");
    check_keys(d, "data", {"decay", "band", "forcing_scale", "probe_rings", "probes_per_ring"});
    c.data.decay = number(d, "data", "decay", c.data.decay);
    c.data.band = static_cast<int>(integer(d, "data", "band", c.data.band));
    c.data.forcing_scale = number(d, "data", "forcing_scale", c.data.forcing_scale);
    c.data.probe_rings = integers(d, "data", "probe_rings", c.data.probe_rings);
    c.data.probes_per_ring = static_cast<int>(integer(d, "data", "probes_per_ring", c.data.probes_per_ring));
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    check_keys(s, "solver", {"cfl", "dt", "snapshot_every"});
    c.solver.cfl = number(s, "solver", "cfl", c.solver.cfl);
    c.solver.dt = number(s, "solver", "dt", c.solver.dt);
    c.solver.snapshot_every = static_cast<int>(integer(s, "solver", "snapshot_every", c.solver.snapshot_every));
  }
  if (j.contains("energy")) {
    const auto& e = j.at("energy");
    check_keys(e, "energy", {"theta", "beta", "betas", "horizon", "nu_max", "gamma", "c2", "loss_grid"});
    c.energy.theta = number(e, "energy", "theta", c.energy.theta);
    c.energy.beta = number(e, "energy", "beta", c.energy.beta);
    c.energy.betas = numbers(e, "energy", "betas", c.energy.betas);
    c.energy.horizon = number(e, "energy", "horizon", c.energy.horizon);
    c.energy.nu_max = static_cast<int>(integer(e, "energy", "nu_max", c.energy.nu_max));
    c.energy.gamma = number(e, "energy", "gamma", c.energy.gamma);
    c.energy.c2 = number(e, "energy", "c2", c.energy.c2);
    c.energy.loss_grid = numbers(e, "energy", "loss_grid", c.energy.loss_grid);
  }
  if (j.contains("suites")) {
    const auto& s = j.at("suites");
    require(s.is_array(), "suites", "expected an array of suite names");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string path = "suites[" + std::to_string(i) + "]";
      require(s[i].is_string(), path, "expected a string");
      c.suites.push_back(s[i].get<std::string>());
    }
  }
  c.output = text(j, "", "output", c.output);
  p.dim = c.grid.dim;
  p.seed = c.seed;
  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  require(c.grid.dim == 1 || c.grid.dim == 2, "grid.dim", "must be 1 or 2");
  const int m = c.grid.points;
  require(m >= 16 && (m & (m - 1)) == 0, "grid.points", "must be a power of two >= 16");
  const auto& p = c.coefficients;
  require(p.amplitude >= 0.0, "coefficients.amplitude", "must be nonnegative");
  require(p.mixed_amplitude >= 0.0, "coefficients.mixed_amplitude", "must be nonnegative");
  require(p.time_depth >= 0 && p.time_depth <= 30, "coefficients.time_depth", "must lie in [0, 30]");
  require(p.space_depth >= 0 && p.space_depth <= 30, "coefficients.space_depth", "must lie in [0, 30]");
  require(p.t_begin <= -1.0, "coefficients.t_begin", "must be <= -1 to leave room for mollification");
  require(p.t_end > p.t_begin, "coefficients.t_end", "must exceed t_begin");
  require(c.data.decay >= 0.0, "data.decay", "must be nonnegative");
  require(c.data.band >= 0 && c.data.band <= m / 3, "data.band", "must lie in [0, M/3]");
  require(c.data.probes_per_ring >= 1, "data.probes_per_ring", "must be >= 1");
  for (std::size_t i = 0; i < c.data.probe_rings.size(); ++i)
    require(c.data.probe_rings[i] >= 0 && std::ldexp(1.0, c.data.probe_rings[i] + 1) <= m / 2.0,
            "data.probe_rings[" + std::to_string(i) + "]", "ring must fit below the Nyquist frequency");
  require(c.solver.cfl > 0.0 && c.solver.cfl <= 2.0, "solver.cfl", "must lie in (0, 2]");
  require(c.solver.dt >= 0.0, "solver.dt", "must be nonnegative");
  require(c.solver.snapshot_every >= 1, "solver.snapshot_every", "must be >= 1");
  const auto& e = c.energy;
  require(e.theta > 0.0 && e.theta < 1.0, "energy.theta", "must lie in (0, 1)");
  require(e.horizon > 0.0, "energy.horizon", "must be positive");
  require(e.horizon <= p.t_end - 1.0, "energy.horizon", "must stay inside the mollified coefficient window");
  require(e.beta > 0.0, "energy.beta", "must be positive");
  require(!e.betas.empty(), "energy.betas", "must not be empty");
  for (std::size_t i = 0; i < e.betas.size(); ++i)
    require(e.betas[i] > 0.0, "energy.betas[" + std::to_string(i) + "]", "must be positive");
  const double beta_max = std::max(e.beta, *std::max_element(e.betas.begin(), e.betas.end()));
  require(e.theta + beta_max / std::numbers::ln2 * e.horizon < 1.0, "energy.betas",
          "theta + beta*_max T must stay below 1");
  require(e.nu_max >= -1 && e.nu_max <= 20, "energy.nu_max", "must be -1 or lie in [0, 20]");
  require(e.gamma == 0.0 || e.gamma >= 1.0, "energy.gamma", "must be 0 (search) or >= 1");
  if (e.gamma >= 1.0) {
    const double l = std::log2(e.gamma);
    require(l == std::floor(l), "energy.gamma", "must be a power of two");
  }
  require(!e.loss_grid.empty(), "energy.loss_grid", "must not be empty");
  for (std::size_t i = 0; i < e.loss_grid.size(); ++i)
    require(e.loss_grid[i] >= 0.0, "energy.loss_grid[" + std::to_string(i) + "]", "must be nonnegative");
  for (std::size_t i = 0; i < c.suites.size(); ++i) {
    const auto& names = suite_names();
    require(c.suites[i] == "all" || std::find(names.begin(), names.end(), c.suites[i]) != names.end(),
            "suites[" + std::to_string(i) + "]", "unknown suite " + c.suites[i]);
  }
  require(!c.output.empty(), "output", "must not be empty");
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("<file>", "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError("<file>", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  const auto& p = c.coefficients;
  return json{
      {"name", c.name},
      {"seed", c.seed},
      {"grid", {{"dim", c.grid.dim}, {"points", c.grid.points}}},
      {"coefficients",
       {{"base", {p.base[0], p.base[1], p.base[2]}},
        {"amplitude", p.amplitude},
        {"time_kind", name_of(p.time_kind)},
        {"time_depth", p.time_depth},
        {"space_kind", name_of(p.space_kind)},
        {"space_depth", p.space_depth},
        {"mixed_amplitude", p.mixed_amplitude},
        {"t_begin", p.t_begin},
        {"t_end", p.t_end}}},
      {"data",
       {{"decay", c.data.decay},
        {"band", c.data.band},
        {"forcing_scale", c.data.forcing_scale},
        {"probe_rings", c.data.probe_rings},
        {"probes_per_ring", c.data.probes_per_ring}}},
      {"solver", {{"cfl", c.solver.cfl}, {"dt", c.solver.dt}, {"snapshot_every", c.solver.snapshot_every}}},
      {"energy",
       {{"theta", c.energy.theta},
        {"beta", c.energy.beta},
        {"betas", c.energy.betas},
        {"horizon", c.energy.horizon},
        {"nu_max", c.energy.nu_max},
        {"gamma", c.energy.gamma},
        {"c2", c.energy.c2},
        {"loss_grid", c.energy.loss_grid}}},
      {"suites", c.suites},
      {"output", c.output}};
}

}  // namespace lpwave
