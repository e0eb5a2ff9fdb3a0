#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "maskpr/masks.hpp"
#include "maskpr/measure.hpp"
#include "maskpr/recover.hpp"
#include "maskpr/setgen.hpp"

namespace maskpr {

enum class SetDensityMode {
  constant_c,   ///< p = c ln M / M over all of Z_M ("paper-c")
  nonzero_log,  ///< p = ln M / M over the nonzero residues ("section4")
};

enum class SignalMode { complex_gaussian, real_gaussian };

struct ExperimentConfig {
  std::vector<int> dims{32};
  std::vector<double> noise_variances{0.0};
  int trials = 1;
  int count = 3;  ///< K
  AlphaMode mask_mode = AlphaMode::gaussian;
  SetDensityMode set_density_mode = SetDensityMode::nonzero_log;
  double c = 4.0;
  RecoveryParams params;
  SignalMode signal_mode = SignalMode::complex_gaussian;
  std::uint64_t master_seed = 1;

  void validate() const;
};

struct TrialRecord {
  int dim = 0;
  double sigma2 = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::int64_t num_masks = 0;
  int set_size = 0;
  double runtime_ms = 0.0;
  double rel_error = 0.0;
  int surviving_vertices = 0;
  double final_gap = 0.0;
  bool success = false;
};

/// splitmix64-style mixing of (master, M, trial) into a per-trial seed.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

/// One random problem instance: masks, modulation set and signal.
struct TrialInstance {
  MaskEnsemble ensemble;
  SignalInstance signal;
};

/// Draws masks, A and x for (M, trial seed) the way run_experiment does.
TrialInstance draw_instance(const ExperimentConfig& config, int dim, std::uint64_t seed);

SignalInstance draw_signal(int dim, SignalMode mode, std::uint64_t seed);

/// Runs the (M, sigma^2, trial) grid. Instances are drawn once per (M, trial)
/// and shared by every noise level. Records come back sorted by (M, sigma^2, trial).
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config);

struct CellSummary {
  int dim = 0;
  double sigma2 = 0.0;
  int n = 0;
  double mean_error = 0.0;
  double std_error = 0.0;
  double mean_runtime_ms = 0.0;
  double std_runtime_ms = 0.0;
  double success_rate = 0.0;
  bool single_sample = false;  ///< n == 1, std reported as 0
};

/// Mean and sample (n - 1) standard deviation per (M, sigma^2) cell.
std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records);

/// Writes one SVG per noise level (rel_error vs M, log-log axes, mean +- std
/// bars with nonpositive lower ends omitted). Returns the written paths.
std::vector<std::filesystem::path> emit_plots(const std::vector<CellSummary>& summary,
                                              const std::filesystem::path& directory);

/// Parses a flat `key = value` config; lists are comma separated, `#` starts a comment.
ExperimentConfig parse_experiment_config(const std::string& text);

}  // namespace maskpr
