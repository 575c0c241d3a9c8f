#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpwave/config.hpp"
#include "lpwave/energy.hpp"
#include "lpwave/solver.hpp"

namespace lpwave {

struct SuiteResult {
  std::string suite;
  bool passed = false;
  /// {suite, status, measured, slopes, seconds}
  nlohmann::json report;
};

/// One verification suite at its fixed desk-scale size; randomness from cfg.seed.
SuiteResult run_suite(const std::string& name, const ExperimentConfig& cfg);

struct VerifyResult {
  bool passed = true;
  std::vector<SuiteResult> suites;
  nlohmann::json report() const;
};

/// Runs the named suites ("all" expands), one suite per worker thread.
VerifyResult run_verify(const ExperimentConfig& cfg, std::vector<std::string> suites, int threads = 1);

CoefficientField build_coefficients(const ExperimentConfig& cfg);

struct InitialData {
  SpectralField u0;
  SpectralField u1;
  /// Spatial profile of the forcing; zero when forcing_scale is 0.
  SpectralField f0;
};

InitialData build_data(const ExperimentConfig& cfg, const TorusGrid& grid);
std::vector<SpectralField> probe_corpus(const ExperimentConfig& cfg, const TorusGrid& grid);
CauchyProblem build_problem(const ExperimentConfig& cfg, const CoefficientField& a,
                            const InitialData& data);

/// {"value": v, "provenance": "measured" | "configured"}
nlohmann::json tagged(const nlohmann::json& value, bool measured);

struct SolveOutcome {
  /// false when the run stopped early or the inequality check found no beta.
  bool passed = false;
  nlohmann::json summary;
};

/// Writes trajectory.bin, energy.csv and summary.json to `out`. A solver blow-up leaves the
/// partial outputs, an INCOMPLETE marker, and rethrows.
SolveOutcome run_solve(const ExperimentConfig& cfg, const std::filesystem::path& out, int threads = 1);

/// Recomputes energy.csv and inequality.json from `out`/trajectory.bin.
SolveOutcome run_energy(const ExperimentConfig& cfg, const std::filesystem::path& out, int threads = 1);

/// Human-readable digest of summary.json and verify_report.json found in `out`.
std::string run_report(const std::filesystem::path& out);

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory(const std::filesystem::path& path);

}  // namespace lpwave
