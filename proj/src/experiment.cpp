#include "lpwave/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "lpwave/errors.hpp"
#include "lpwave/spaces.hpp"
#include "lpwave/stats.hpp"

namespace lpwave {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDataStream = 0x9e3779b97f4a7c15ull;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> dyadic_epsilons(int first, int last) {
  std::vector<double> e;
  for (int j = first; j <= last; ++j) e.push_back(std::ldexp(1.0, -j));
  return e;
}

json suite_partition(const ExperimentConfig& cfg, bool& passed) {
  const TorusGrid g(1, 1024);
  CutoffSystem cs;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> decay(0.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double p = decay(rng);
    const auto u = random_real_field(g, rng, [p](double r) { return std::pow(1.0 + r, -p); });
    worst = std::max(worst, partition_defect(cs, u));
  }
  passed = worst <= 1e-12;
  return {{"measured", {{"max_defect", worst}, {"fields", 100}, {"points", g.points_per_axis()}}},
          {"slopes", json::object()}};
}

json suite_bernstein(const ExperimentConfig& cfg, bool& passed) {
  const TorusGrid g(1, 1024);
  CutoffSystem cs;
  json measured, slopes;
  passed = true;
  for (int order = 0; order <= 2; ++order) {
    const auto rep = bernstein_probe(cs, g, {3, 4, 5, 6, 7, 8}, {order, 0}, 20, cfg.seed);
    const std::string key = "alpha_" + std::to_string(order);
    slopes[key] = rep.slope;
    measured[key] = {{"c_lower", rep.c_lower}, {"c_upper", rep.c_upper}, {"spread", rep.spread}};
    passed = passed && std::abs(rep.slope - order) <= 0.05 && rep.spread <= 4.0;
  }
  return {{"measured", measured}, {"slopes", slopes}};
}

json suite_mollifier(const ExperimentConfig& cfg, bool& passed) {
  CoefficientProfile p;
  p.amplitude = 0.25;
  p.time_kind = TimeRegularity::log_zygmund;
  p.time_depth = 16;
  p.space_kind = SpaceRegularity::none;
  p.space_depth = 0;
  p.seed = cfg.seed;
  const auto a = make_coefficients(p);
  const auto fits = mollifier_bound_fit(a, {1.0, 8.0}, dyadic_epsilons(3, 12));
  json slopes = json::array();
  passed = true;
  for (const auto& f : fits) {
    slopes.push_back({{"gamma", f.gamma},
                      {"difference", f.slope_difference},
                      {"first", f.slope_first},
                      {"second", f.slope_second}});
    passed = passed && f.passed;
  }
  return {{"measured", {{"K0", a.K0()}}}, {"slopes", slopes}};
}

json suite_lz(const ExperimentConfig& cfg, bool& passed) {
  CutoffSystem cs;
  json seeds = json::array();
  passed = true;
  double worst_ratio = 1.0, worst_variation = 0.0;
  for (int s = 0; s < 10; ++s) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(s);
    double sem[2], ind[2];
    int idx = 0;
    for (int depth : {8, 14}) {
      const auto samples = sample_periodic(lz_series(depth, seed), 65536);
      sem[idx] = lz_seminorm(samples).seminorm;
      ind[idx] = lz_dyadic_indicator(cs, samples);
      ++idx;
    }
    const double ratio = std::max(sem[1] / ind[1], ind[1] / sem[1]);
    const double variation = std::max(std::abs(sem[1] - sem[0]) / sem[0], std::abs(ind[1] - ind[0]) / ind[0]);
    worst_ratio = std::max(worst_ratio, ratio);
    worst_variation = std::max(worst_variation, variation);
    seeds.push_back({{"seed", seed}, {"seminorm", sem[1]}, {"indicator", ind[1]}, {"variation", variation}});
  }
  passed = worst_ratio <= 20.0 && worst_variation <= 0.15;
  return {{"measured", {{"worst_ratio", worst_ratio}, {"worst_variation", worst_variation}, {"seeds", seeds}}},
          {"slopes", json::object()}};
}

json suite_kernel(const ExperimentConfig&, bool& passed) {
  const TorusGrid g(1, 1024);
  std::vector<int> xs;
  for (int j = 2; j <= 8; ++j) xs.push_back(static_cast<int>(1.5 * (1 << j)));
  std::vector<KernelReport> reps;
  double moment = 0.0;
  for (double gamma : {1.0, 8.0}) {
    reps.push_back(kernel_bounds_probe(cutoff_for_gamma(gamma, g), xs));
    for (const auto& s : reps.back().samples) moment = std::max(moment, std::abs(s.moment));
  }
  json spreads;
  double worst = 0.0;
  for (int f = 0; f < 4; ++f) {
    const double sp = kernel_spread(reps, f, false);
    spreads["family_" + std::to_string(f)] = sp;
    worst = std::max(worst, sp);
  }
  passed = worst <= 8.0 && moment <= 1e-12;
  return {{"measured", {{"spreads", spreads}, {"max_spread", worst}, {"moment", moment}}},
          {"slopes", json::object()}};
}

json suite_remainder(const ExperimentConfig& cfg, bool& passed) {
  const TorusGrid g(1, 4096);
  CutoffSystem cs;
  const double gamma = 1.0;
  const auto cut = cutoff_for_gamma(gamma, g);
  auto symbol = [&](std::uint64_t seed, double order) {
    const auto f = ll_series(9, seed);
    std::vector<double> s(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) s[p] = 1.0 + 0.25 * f(g.point(p)[0]);
    return product(function_symbol(std::move(s)), lambda_symbol(gamma, order));
  };
  const std::vector<int> rings{5, 6, 7, 8, 9};
  std::vector<std::vector<SpectralField>> probes;
  std::mt19937_64 rng(cfg.seed);
  for (int j : rings) {
    std::vector<SpectralField> v;
    for (int t = 0; t < 3; ++t) v.push_back(random_ring_field(cs, g, j, rng));
    probes.push_back(std::move(v));
  }
  json slopes = json::array();
  passed = true;
  for (auto [m1, m2] : {std::pair{0.0, 1.0}, std::pair{0.0, 0.0}, std::pair{1.0, 0.0}}) {
    const auto rep = remainder_probe(cut, symbol(cfg.seed + 10, m1), symbol(cfg.seed + 22, m2), rings, probes);
    slopes.push_back({{"m", m1},
                      {"m_prime", m2},
                      {"composition_raw", rep.composition_slope_raw},
                      {"composition", rep.composition_slope},
                      {"composition_bound", rep.composition_bound},
                      {"adjoint_raw", rep.adjoint_slope_raw},
                      {"adjoint", rep.adjoint_slope},
                      {"adjoint_bound", rep.adjoint_bound}});
    passed = passed && rep.passed;
  }
  return {{"measured", {{"points", 4096}, {"rings", rings}}}, {"slopes", slopes}};
}

json suite_positivity(const ExperimentConfig& cfg, bool& passed) {
  const TorusGrid g(1, 512);
  CutoffSystem cs;
  CoefficientProfile p;
  p.amplitude = 0.25;
  p.time_depth = 12;
  p.space_depth = 7;
  p.seed = cfg.seed;
  const auto a = make_coefficients(p);
  std::vector<SpectralField> probes;
  std::mt19937_64 rng(cfg.seed);
  for (int j = 1; j <= 7; ++j)
    for (int t = 0; t < 3; ++t) probes.push_back(random_ring_field(cs, g, j, rng));
  GammaSearch search;
  search.times = {0.0, 0.5};
  const auto choice = choose_gamma_mu(a, probes, search);
  if (!choice.found) {
    passed = false;
    return {{"measured", {{"gamma_found", false}, {"margin_l2", choice.margin_l2}, {"margin_h1", choice.margin_h1}}},
            {"slopes", json::object()}};
  }
  const auto cut = cutoff_for_gamma(choice.gamma, g);
  Bracket br;
  double threshold = 0.0;
  json per_nu = json::array();
  for (int nu = 0; nu <= 8; ++nu) {
    const auto ae = smooth_in_time(a, std::ldexp(1.0, -nu));
    const AlphaSymbol alpha(ae, choice.gamma, 0.3, g);
    const auto rep = positivity_probe(cut, alpha.power(-0.5), probes);
    br.add(rep.min_ratio);
    threshold = std::max(threshold, 0.5 / std::sqrt(alpha.upper_bound()));
    per_nu.push_back(rep.min_ratio);
  }
  const double spread = br.width() - 1.0;
  passed = br.lo >= threshold && spread <= 0.10;
  return {{"measured",
           {{"gamma", choice.gamma}, {"mu", choice.mu}, {"min_ratio", br.lo}, {"threshold", threshold},
            {"spread", spread}, {"per_nu", per_nu}}},
          {"slopes", json::object()}};
}

json suite_commutator(const ExperimentConfig& cfg, bool& passed) {
  const TorusGrid g(1, 4096);
  CutoffSystem cs;
  CoefficientProfile p;
  p.amplitude = 0.25;
  p.time_kind = TimeRegularity::none;
  p.space_kind = SpaceRegularity::log_lipschitz;
  p.space_depth = 10;
  p.seed = cfg.seed;
  const auto a = make_coefficients(p);
  const auto cut = cutoff_for_gamma(1.0, g);
  std::mt19937_64 rng(cfg.seed);
  std::vector<double> x, y;
  double far = 0.0, low = 0.0, defect = 0.0;
  json rings = json::array();
  for (int nu = 5; nu <= 9; ++nu) {
    double log_sum = 0.0;
    const int probes = 4;
    for (int t = 0; t < probes; ++t) {
      auto u = random_ring_field(cs, g, nu - 1, rng) + random_ring_field(cs, g, nu, rng) +
               random_ring_field(cs, g, nu + 1, rng);
      const auto r = commutator_probe(a, u, nu, cut);
      log_sum += std::log(r.ratio_per_log);
      far = std::max(far, r.far_piece_max);
      if (r.low_piece_max >= 0.0) low = std::max(low, r.low_piece_max);
      defect = std::max(defect, r.decomposition_defect);
    }
    const double mean = std::exp(log_sum / probes);
    x.push_back(std::ldexp(1.0, nu));
    y.push_back(mean);
    rings.push_back({{"nu", nu}, {"ratio_per_log", mean}});
  }
  const double slope = log_log_slope(x, y);
  passed = far == 0.0 && low == 0.0 && std::abs(slope) <= 0.15;
  return {{"measured", {{"far_piece_max", far}, {"low_piece_max", low}, {"decomposition_defect", defect},
                        {"rings", rings}}},
          {"slopes", {{"ratio_per_log", slope}}}};
}

}  // namespace

SuiteResult run_suite(const std::string& name, const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  bool passed = false;
  json body;
  if (name == "partition") body = suite_partition(cfg, passed);
  else if (name == "bernstein") body = suite_bernstein(cfg, passed);
  else if (name == "mollifier") body = suite_mollifier(cfg, passed);
  else if (name == "lz-characterization") body = suite_lz(cfg, passed);
  else if (name == "kernel-bounds") body = suite_kernel(cfg, passed);
  else if (name == "remainder") body = suite_remainder(cfg, passed);
  else if (name == "positivity") body = suite_positivity(cfg, passed);
  else if (name == "commutator") body = suite_commutator(cfg, passed);
  else throw SchemaError("suite", "unknown suite " + name);
  SuiteResult r;
  r.suite = name;
  r.passed = passed;
  r.report = {{"suite", name},
              {"status", passed ? "pass" : "fail"},
              {"measured", body["measured"]},
              {"slopes", body["slopes"]},
              {"seconds", seconds_since(t0)}};
  return r;
}

json VerifyResult::report() const {
  json suites_json = json::array();
  for (const auto& s : suites) suites_json.push_back(s.report);
  return {{"status", passed ? "pass" : "fail"}, {"suites", suites_json}};
}

VerifyResult run_verify(const ExperimentConfig& cfg, std::vector<std::string> suites, int threads) {
  if (suites.empty()) suites = cfg.suites;
  if (suites.empty() || std::find(suites.begin(), suites.end(), "all") != suites.end())
    suites = suite_names();
  for (const auto& s : suites) {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), s) == names.end())
      throw SchemaError("suite", "unknown suite " + s);
  }
  VerifyResult out;
  out.suites.resize(suites.size());
  std::vector<std::exception_ptr> errors(suites.size());
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(suites.size())));
  auto work = [&](int w) {
    for (std::size_t i = static_cast<std::size_t>(w); i < suites.size(); i += static_cast<std::size_t>(workers)) {
      try {
        out.suites[i] = run_suite(suites[i], cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (const auto& s : out.suites) out.passed = out.passed && s.passed;
  return out;
}

CoefficientField build_coefficients(const ExperimentConfig& cfg) {
  auto p = cfg.coefficients;
  p.dim = cfg.grid.dim;
  p.seed = cfg.seed;
  return make_coefficients(p);
}

InitialData build_data(const ExperimentConfig& cfg, const TorusGrid& grid) {
  std::mt19937_64 rng(cfg.seed ^ kDataStream);
  const double band = cfg.data.band > 0 ? cfg.data.band : dealiasing_limit(grid);
  const double decay = cfg.data.decay;
  auto amplitude = [band, decay](double r) { return r <= band ? std::pow(1.0 + r, -decay) : 0.0; };
  // velocity and forcing have zero mean
  auto zero_mean = [&amplitude](double r) { return r == 0.0 ? 0.0 : amplitude(r); };
  InitialData d{random_real_field(grid, rng, amplitude), random_real_field(grid, rng, zero_mean),
                SpectralField::zero(grid)};
  const auto f0 = random_real_field(grid, rng, zero_mean);
  if (cfg.data.forcing_scale != 0.0) d.f0 = f0.scaled(cfg.data.forcing_scale);
  return d;
}

std::vector<SpectralField> probe_corpus(const ExperimentConfig& cfg, const TorusGrid& grid) {
  CutoffSystem cs;
  std::mt19937_64 rng(cfg.seed ^ (kDataStream >> 1));
  std::vector<SpectralField> probes;
  for (int j : cfg.data.probe_rings)
    for (int t = 0; t < cfg.data.probes_per_ring; ++t) probes.push_back(random_ring_field(cs, grid, j, rng));
  return probes;
}

CauchyProblem build_problem(const ExperimentConfig& cfg, const CoefficientField& a,
                            const InitialData& data) {
  CauchyProblem p{a, data.u0, data.u1, {}, cfg.energy.horizon, cfg.solver.dt, cfg.solver.cfl,
                  cfg.solver.snapshot_every};
  if (cfg.data.forcing_scale != 0.0) {
    const auto f0 = data.f0;
    p.forcing = [f0](double t) { return f0.scaled(std::cos(t)); };
  }
  return p;
}

json tagged(const json& value, bool measured) {
  return {{"value", value}, {"provenance", measured ? "measured" : "configured"}};
}

void write_trajectory(const fs::path& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError("cannot write " + path.string());
  const auto& g = traj.u.empty() ? throw ConfigurationError("empty trajectory") : traj.u.front().grid();
  out.write("LPWTRAJ1", 8);
  const std::int32_t header[2] = {g.dim(), g.points_per_axis()};
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  const std::uint64_t count = traj.times.size();
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  out.write(reinterpret_cast<const char*>(&traj.dt), sizeof traj.dt);
  auto field = [&](const SpectralField& f) {
    const auto c = f.coefficients();
    out.write(reinterpret_cast<const char*>(c.data()), static_cast<std::streamsize>(c.size_bytes()));
  };
  for (std::size_t k = 0; k < count; ++k) {
    out.write(reinterpret_cast<const char*>(&traj.times[k]), sizeof(double));
    field(traj.u[k]);
    field(traj.ut[k]);
    field(k < traj.residual.size() ? traj.residual[k] : SpectralField::zero(g));
  }
  if (!out) throw ConfigurationError("failed writing " + path.string());
}

Trajectory read_trajectory(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot open " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "LPWTRAJ1", 8) != 0) throw ConfigurationError("not a trajectory file");
  std::int32_t header[2];
  in.read(reinterpret_cast<char*>(header), sizeof header);
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  Trajectory traj;
  in.read(reinterpret_cast<char*>(&traj.dt), sizeof traj.dt);
  if (!in) throw ConfigurationError("truncated trajectory header");
  const TorusGrid g(header[0], header[1]);
  auto field = [&] {
    std::vector<Complex> c(g.size());
    in.read(reinterpret_cast<char*>(c.data()), static_cast<std::streamsize>(c.size() * sizeof(Complex)));
    return SpectralField::from_coefficients(g, std::move(c));
  };
  for (std::uint64_t k = 0; k < count; ++k) {
    double t = 0.0;
    in.read(reinterpret_cast<char*>(&t), sizeof t);
    traj.times.push_back(t);
    traj.u.push_back(field());
    traj.ut.push_back(field());
    traj.residual.push_back(field());
    if (!in) throw ConfigurationError("truncated trajectory body");
  }
  return traj;
}

namespace {

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

struct EnergyStage {
  json summary;
  bool passed = false;
};

// Energy rows, inequality sweep and loss fit for a finished trajectory.
EnergyStage energy_stage(const ExperimentConfig& cfg, const CoefficientField& a, const Trajectory& traj,
                         double gamma, int mu, const fs::path& out, int threads) {
  const TorusGrid& g = traj.u.front().grid();
  EnergyConfig ec;
  ec.theta = cfg.energy.theta;
  ec.beta = cfg.energy.beta;
  ec.gamma = gamma;
  ec.mu = mu;
  ec.nu_max = cfg.energy.nu_max;
  ec.horizon = traj.times.back();
  EnergyFunctional ef(a, ec, g);
  ef.set_threads(threads);
  const auto trace = trace_energy(ef, traj);

  double c2 = cfg.energy.c2;
  const bool calibrated = c2 < 0.0;
  if (calibrated) {
    auto lip = cfg;
    lip.coefficients.time_kind = TimeRegularity::lipschitz;
    lip.coefficients.space_kind = SpaceRegularity::lipschitz;
    const auto a_lip = build_coefficients(lip);
    const auto data = build_data(cfg, g);
    auto problem = build_problem(cfg, a_lip, data);
    problem.horizon = traj.times.back();
    const auto traj_lip = solve(problem);
    EnergyFunctional ef_lip(a_lip, ec, g);
    ef_lip.set_threads(threads);
    c2 = calibrate_c2(trace_energy(ef_lip, traj_lip), cfg.energy.beta);
  }

  const auto rows = energy_rows(trace, cfg.energy.beta, c2);
  {
    std::ofstream csv(out / "energy.csv");
    write_energy_csv(csv, rows, ef.nu_max());
  }
  InequalityOptions opts;
  opts.betas = cfg.energy.betas;
  opts.c2 = c2;
  const auto ineq = inequality_check(trace, opts);
  json per_beta = json::array();
  for (const auto& b : ineq.per_beta)
    per_beta.push_back({{"beta", b.beta},
                        {"horizon", b.horizon},
                        {"samples", b.samples},
                        {"fraction", b.fraction},
                        {"passed", b.passed},
                        {"gronwall", b.gronwall_ok},
                        {"worst_time", b.worst_time}});
  write_json(out / "inequality.json", {{"c2", c2}, {"per_beta", per_beta}, {"found", ineq.found},
                                       {"beta", ineq.found ? json(ineq.beta) : json(nullptr)}});

  json loss = nullptr;
  if (cfg.data.forcing_scale == 0.0) {
    try {
      const auto lr = loss_meter(traj, cfg.energy.theta, cfg.energy.loss_grid);
      loss = {{"found", lr.found},
              {"beta_star", lr.found ? json(lr.beta_star) : json(nullptr)},
              {"at_floor", lr.at_floor},
              {"constant", lr.constant},
              {"sup_ratio", lr.sup_ratio}};
    } catch (const DomainError& e) {
      loss = {{"error", e.what()}};
    }
  }
  double tail = 0.0;
  for (const auto& s : trace.samples) tail = std::max(tail, s.tail_fraction);

  EnergyStage st;
  st.passed = ineq.found;
  st.summary = {
      {"nu_max", tagged(ef.nu_max(), false)},
      {"c2", tagged(c2, calibrated)},
      {"inequality_beta", tagged(ineq.found ? json(ineq.beta) : json(nullptr), true)},
      {"verdict", ineq.found ? "pass" : "fail"},
      {"fitted_beta_star", tagged(loss.is_object() && loss.contains("beta_star") ? loss["beta_star"] : json(nullptr), true)},
      {"loss", loss},
      {"tail_fraction", tagged(tail, true)},
      {"truncation_warning", tail > 0.01},
      {"rows", rows.size()}};
  return st;
}

}  // namespace

SolveOutcome run_solve(const ExperimentConfig& cfg, const fs::path& out, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(out);
  fs::remove(out / "INCOMPLETE");
  const TorusGrid g(cfg.grid.dim, cfg.grid.points);
  const auto a = build_coefficients(cfg);

  double gamma = cfg.energy.gamma;
  bool gamma_measured = false;
  json gamma_report = nullptr;
  if (gamma == 0.0) {
    GammaSearch search;
    search.times = {0.0, 0.5 * cfg.energy.horizon};
    const auto choice = choose_gamma_mu(a, probe_corpus(cfg, g), search);
    gamma_report = {{"found", choice.found}, {"margin_l2", choice.margin_l2}, {"margin_h1", choice.margin_h1},
                    {"worst_probe", choice.worst_probe}, {"tried", choice.tried}};
    if (!choice.found) {
      SolveOutcome o;
      o.summary = {{"name", cfg.name}, {"status", "gamma search failed"}, {"gamma_search", gamma_report}};
      write_json(out / "summary.json", o.summary);
      return o;
    }
    gamma = choice.gamma;
    gamma_measured = true;
  }
  const int mu = static_cast<int>(std::lround(std::log2(gamma))) - 2;

  const auto data = build_data(cfg, g);
  const auto problem = build_problem(cfg, a, data);
  json summary = {{"name", cfg.name},
                  {"seed", tagged(cfg.seed, false)},
                  {"points", tagged(cfg.grid.points, false)},
                  {"dim", tagged(cfg.grid.dim, false)},
                  {"theta", tagged(cfg.energy.theta, false)},
                  {"beta", tagged(cfg.energy.beta, false)},
                  {"horizon", tagged(cfg.energy.horizon, false)},
                  {"lambda0", tagged(a.lambda0(), true)},
                  {"Lambda0", tagged(a.Lambda0(), true)},
                  {"gamma", tagged(gamma, gamma_measured)},
                  {"mu", tagged(mu, gamma_measured)},
                  {"gamma_search", gamma_report},
                  {"dt", tagged(choose_time_step(problem), cfg.solver.dt == 0.0)}};
  Trajectory traj;
  try {
    traj = solve(problem);
  } catch (const BlowUpError& e) {
    summary["status"] = "blow-up";
    summary["last_valid_time"] = tagged(e.last_valid_time(), true);
    write_json(out / "summary.json", summary);
    std::ofstream(out / "INCOMPLETE") << e.what() << '\n';
    throw;
  }
  write_trajectory(out / "trajectory.bin", traj);
  const auto st = energy_stage(cfg, a, traj, gamma, mu, out, threads);
  summary.update(st.summary);
  summary["status"] = "complete";
  summary["runtime_seconds"] = tagged(seconds_since(t0), true);
  write_json(out / "summary.json", summary);
  return {st.passed, summary};
}

SolveOutcome run_energy(const ExperimentConfig& cfg, const fs::path& out, int threads) {
  const auto traj = read_trajectory(out / "trajectory.bin");
  if (traj.times.empty()) throw ConfigurationError("trajectory is empty");
  const auto& g = traj.u.front().grid();
  if (g.dim() != cfg.grid.dim || g.points_per_axis() != cfg.grid.points)
    throw ConfigurationError("trajectory grid does not match the configuration");
  const auto a = build_coefficients(cfg);
  double gamma = cfg.energy.gamma;
  if (gamma == 0.0) {
    std::ifstream in(out / "summary.json");
    if (!in) throw ConfigurationError("gamma search result needs summary.json from a solve run");
    json s;
    in >> s;
    gamma = s.at("gamma").at("value").get<double>();
  }
  const int mu = static_cast<int>(std::lround(std::log2(gamma))) - 2;
  const auto st = energy_stage(cfg, a, traj, gamma, mu, out, threads);
  return {st.passed, st.summary};
}

std::string run_report(const fs::path& out) {
  std::ostringstream os;
  bool any = false;
  auto value = [](const json& j) -> std::string {
    if (j.is_object() && j.contains("value")) return j["value"].dump();
    return j.dump();
  };
  if (std::ifstream in(out / "summary.json"); in) {
    any = true;
    json s;
    in >> s;
    os << "run " << s.value("name", std::string("?")) << ": " << s.value("status", std::string("?")) << '\n';
    for (const char* key : {"lambda0", "Lambda0", "gamma", "mu", "c2", "inequality_beta", "fitted_beta_star",
                            "tail_fraction", "runtime_seconds"})
      if (s.contains(key)) os << "  " << key << " = " << value(s[key]) << '\n';
    if (s.contains("verdict")) os << "  verdict = " << s["verdict"].get<std::string>() << '\n';
  }
  if (std::ifstream in(out / "verify_report.json"); in) {
    any = true;
    json v;
    in >> v;
    os << "verify: " << v.value("status", std::string("?")) << '\n';
    for (const auto& s : v["suites"])
      os << "  " << s["suite"].get<std::string>() << ": " << s["status"].get<std::string>() << '\n';
  }
  if (!any) throw ConfigurationError("no summary.json or verify_report.json in " + out.string());
  return os.str();
}

}  // namespace lpwave
