#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpwave/config.hpp"
#include "lpwave/errors.hpp"
#include "lpwave/experiment.hpp"

namespace {

constexpr int kSuccess = 0;
constexpr int kFailure = 1;
constexpr int kConfigError = 2;

struct Options {
  std::string config;
  std::vector<std::string> suites;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

lpwave::ExperimentConfig load(const Options& o) {
  lpwave::ExperimentConfig cfg;
  if (!o.config.empty()) cfg = lpwave::load_config(o.config);
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.coefficients.seed = *o.seed;
  }
  lpwave::validate(cfg);
  return cfg;
}

std::filesystem::path out_dir(const Options& o, const lpwave::ExperimentConfig& cfg) {
  return o.out.empty() ? std::filesystem::path(cfg.output) : std::filesystem::path(o.out);
}

int verify(const Options& o) {
  const auto cfg = load(o);
  const auto result = lpwave::run_verify(cfg, o.suites, o.threads);
  const auto out = out_dir(o, cfg);
  std::filesystem::create_directories(out);
  std::ofstream(out / "verify_report.json") << result.report().dump(2) << '\n';
  for (const auto& s : result.suites)
    std::cout << s.suite << ": " << (s.passed ? "pass" : "fail") << '\n';
  return result.passed ? kSuccess : kFailure;
}

int solve(const Options& o) {
  const auto cfg = load(o);
  const auto result = lpwave::run_solve(cfg, out_dir(o, cfg), o.threads);
  std::cout << result.summary.dump(2) << '\n';
  return result.passed ? kSuccess : kFailure;
}

int energy(const Options& o) {
  const auto cfg = load(o);
  const auto result = lpwave::run_energy(cfg, out_dir(o, cfg), o.threads);
  std::cout << result.summary.dump(2) << '\n';
  return result.passed ? kSuccess : kFailure;
}

int report(const Options& o) {
  std::filesystem::path out = o.out;
  if (out.empty()) out = o.config.empty() ? std::filesystem::path("out") : std::filesystem::path(load(o).output);
  std::cout << lpwave::run_report(out);
  return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Littlewood-Paley energy experiments for wave equations with rough coefficients"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "experiment config (JSON)");
    sub->add_option("--out", o.out, "output directory (overrides config)");
    sub->add_option("--seed", o.seed, "random seed (overrides config)");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  };
  auto* v = app.add_subcommand("verify", "run verification suites");
  add_common(v);
  v->add_option("--suite", o.suites, "suite name, repeatable; 'all' runs every suite");
  auto* s = app.add_subcommand("solve", "solve and track the energy");
  add_common(s);
  auto* e = app.add_subcommand("energy", "recompute the energy from a stored trajectory");
  add_common(e);
  auto* r = app.add_subcommand("report", "summarize outputs");
  add_common(r);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kSuccess : kConfigError;
  }

  try {
    if (v->parsed()) return verify(o);
    if (s->parsed()) return solve(o);
    if (e->parsed()) return energy(o);
    return report(o);
  } catch (const lpwave::SchemaError& err) {
    std::cerr << "config error at " << err.path() << ": " << err.what() << '\n';
    return kConfigError;
  } catch (const lpwave::ConfigurationError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kConfigError;
  } catch (const lpwave::EllipticityError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kConfigError;
  } catch (const lpwave::BlowUpError& err) {
    std::cerr << "blow-up at t = " << err.last_valid_time() << ": " << err.what() << '\n';
    return kFailure;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kFailure;
  }
}
