#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpwave/rough.hpp"

namespace lpwave {

struct GridSpec {
  int dim = 1;
  int points = 512;
};

/// Random initial data and forcing: Gaussian coefficients with amplitude (1 + |k|)^-decay
/// on |k| <= band (0 selects the 2/3 band of the grid).
struct DataSpec {
  double decay = 1.5;
  int band = 0;
  /// f(t, x) = forcing_scale cos(t) f0(x); 0 means f = 0.
  double forcing_scale = 0.0;
  /// Dyadic rings of the probe corpus used to choose gamma.
  std::vector<int> probe_rings{1, 2, 3, 4, 5, 6, 7};
  int probes_per_ring = 3;
};

struct SolverSpec {
  double cfl = 0.2;
  /// 0 selects the automatic step.
  double dt = 0.0;
  int snapshot_every = 1;
};

struct EnergySpec {
  double theta = 0.5;
  /// beta of the CSV rows and of the C2 calibration.
  double beta = 0.2;
  std::vector<double> betas{0.025, 0.05, 0.1, 0.2, 0.4};
  double horizon = 0.5;
  int nu_max = -1;
  /// 0 selects gamma by the probe search.
  double gamma = 0.0;
  /// Negative selects calibration on the Lipschitz counterpart of the coefficients.
  double c2 = -1.0;
  std::vector<double> loss_grid{0.0, 0.025, 0.05, 0.1, 0.2, 0.4};
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 1;
  GridSpec grid;
  CoefficientProfile coefficients = [] {
    CoefficientProfile p;
    p.amplitude = 0.25;
    p.time_depth = 8;
    return p;
  }();
  DataSpec data;
  SolverSpec solver;
  EnergySpec energy;
  std::vector<std::string> suites;
  std::string output = "out";
};

/// Names accepted in "suites" and by --suite.
const std::vector<std::string>& suite_names();

/// Parses and validates; throws SchemaError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Cross-field invariants: M a power of two, theta + beta*_max T < 1, band within the grid.
void validate(const ExperimentConfig& cfg);

}  // namespace lpwave
