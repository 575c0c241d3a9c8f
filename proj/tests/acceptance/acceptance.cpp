#include <boost/numeric/odeint.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "lpwave/experiment.hpp"
#include "lpwave/spaces.hpp"
#include "lpwave/stats.hpp"

using namespace lpwave;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed = false;
  std::string detail;
};

Outcome from_suite(const std::string& name) {
  const auto r = run_suite(name, parse_config(json::object()));
  return {r.passed, r.report["measured"].dump()};
}

Outcome sobolev_brackets() {
  const CutoffSystem cs;
  const TorusGrid g(1, 1024);
  bool ok = true;
  std::string detail;
  for (auto spec : {NormSpec{-1, 0, 0}, NormSpec{0, 0, 0}, NormSpec{0.5, 1, 0}, NormSpec{1, -1, 0}}) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> decay(0.0, 3.0);
    Bracket b;
    for (int i = 0; i < 100; ++i) {
      const double p = decay(rng);
      const auto u = random_real_field(g, rng, [p](double r) { return std::pow(1.0 + r, -p); });
      b.add(dyadic_norm(cs, u, spec) / sobolev_norm(u, spec));
    }
    ok = ok && b.width() <= 10.0;
    detail += "width(" + std::to_string(spec.s) + "," + std::to_string(spec.alpha) + ")=" + std::to_string(b.width()) + " ";
  }
  return {ok, detail};
}

double max_value_error(const SpectralField& a, const SpectralField& b) {
  double e = 0.0;
  const auto d = a - b;
  for (auto c : d.values()) e = std::max(e, std::abs(c));
  return e;
}

Outcome solver_sanity() {
  const TorusGrid g64(1, 64);
  const int k = 4;
  const auto one = constant_coefficients(1, {1.0, 0.0, 0.0});
  const auto wave = solve({one, SpectralField::mode(g64, {k, 0}), SpectralField::zero(g64), {}, 2 * kPi / k});
  const double T = wave.times.back();
  const double plane = max_value_error(wave.u.back(), SpectralField::mode(g64, {k, 0}, std::cos(k * T)));

  const TorusGrid g32(1, 32);
  const int m = 3;
  const double c2 = 2.0;
  const auto a2 = constant_coefficients(1, {c2, 0.0, 0.0});
  const auto ms = solve({a2, SpectralField::zero(g32), SpectralField::zero(g32),
                         [&](double t) { return SpectralField::mode(g32, {m, 0}, 2.0 + c2 * m * m * t * t); }, 1.5});
  double manufactured = 0.0;
  for (std::size_t i = 0; i < ms.times.size(); ++i)
    manufactured = std::max(manufactured, max_value_error(ms.u[i], SpectralField::mode(g32, {m, 0}, ms.times[i] * ms.times[i])));

  EntrySeries e;
  e.base = 2.0;
  e.terms.push_back({0.3, 3.0, {0, 0}, -kPi / 2});
  const CoefficientField breathing(1, {e}, -1.0, 4.0);
  using State = std::array<double, 2>;
  namespace ode = boost::numeric::odeint;
  State ref{1.0, 0.0};
  const int n = 2;
  ode::integrate_adaptive(
      ode::make_controlled<ode::runge_kutta_dopri5<State>>(1e-14, 1e-14),
      [&](const State& s, State& d, double t) {
        d[0] = s[1];
        d[1] = -breathing.value(0, 0, t, {0, 0}) * n * n * s[0];
      },
      ref, 0.0, 2.0, 1e-4);
  const auto u0 = SpectralField::mode(g32, {n, 0}) + SpectralField::mode(g32, {-n, 0});
  std::vector<double> steps, errors;
  for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
    const auto tr = solve({breathing, u0, SpectralField::zero(g32), {}, 2.0, dt, 5.0});
    steps.push_back(dt);
    errors.push_back(std::abs(tr.u.back().coefficient({n, 0}).real() - ref[0]));
  }
  const double slope = log_log_slope(steps, errors);
  std::ostringstream detail;
  detail << "plane=" << plane << " manufactured=" << manufactured << " slope=" << slope;
  return {plane <= 1e-6 && manufactured <= 1e-6 && slope >= 3.8, detail.str()};
}

fs::path config_dir() { return fs::path(LPWAVE_CONFIGS); }

Outcome no_loss() {
  const auto cfg = load_config(config_dir() / "lipschitz_no_loss.json");
  const auto dir = fs::temp_directory_path() / "lpwave_acceptance_noloss";
  fs::remove_all(dir);
  const auto out = run_solve(cfg, dir);
  const auto traj = read_trajectory(dir / "trajectory.bin");
  double worst = 0.0;
  for (double s : {-1.0, 0.0, 1.0}) {
    auto norm = [&](std::size_t i) {
      return torus_sobolev_norm(traj.u[i], s + 1.0) + torus_sobolev_norm(traj.ut[i], s);
    };
    const double n0 = norm(0);
    for (std::size_t i = 0; i < traj.times.size(); ++i) worst = std::max(worst, norm(i) / n0);
  }
  const bool floor = out.summary["loss"].is_object() && out.summary["loss"].value("at_floor", false);
  fs::remove_all(dir);
  return {worst <= 3.0 && floor,
          "max_norm_ratio=" + std::to_string(worst) + " beta_star=" + out.summary["fitted_beta_star"]["value"].dump()};
}

Outcome differential_inequality() {
  auto cfg = load_config(config_dir() / "lzll.json");
  cfg.seed = 11;
  cfg.coefficients.seed = 3;
  const auto dir = fs::temp_directory_path() / "lpwave_acceptance_ineq";
  fs::remove_all(dir);
  const auto out = run_solve(cfg, dir);
  std::ifstream in(dir / "inequality.json");
  json ineq;
  in >> ineq;
  std::string detail = "c2=" + ineq["c2"].dump();
  for (const auto& b : ineq["per_beta"])
    detail += " beta" + b["beta"].dump() + ":" + b["fraction"].dump();
  fs::remove_all(dir);
  return {out.passed && ineq["found"].get<bool>(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"partition of unity", [] { return from_suite("partition"); }},
      {"bernstein scaling", [] { return from_suite("bernstein"); }},
      {"sobolev dyadic equivalence", sobolev_brackets},
      {"lz characterization", [] { return from_suite("lz-characterization"); }},
      {"mollifier bounds", [] { return from_suite("mollifier"); }},
      {"kernel bounds", [] { return from_suite("kernel-bounds"); }},
      {"symbolic calculus remainders", [] { return from_suite("remainder"); }},
      {"positivity uniform in eps", [] { return from_suite("positivity"); }},
      {"solver sanity", solver_sanity},
      {"no-loss control", no_loss},
      {"main differential inequality", differential_inequality},
      {"commutator structure", [] { return from_suite("commutator"); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << i + 1 << " " << criteria[i].first << " ("
              << secs << " s) " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
