#pragma once

#include "dcs/instance.hpp"
#include "dcs/serialize.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dcs {

struct ExperimentConfig {
  std::string graph = "path:5";
  InstanceSpec problem;
  std::string algorithm = "dcs";  // dpd | dcs | sdcs
  std::vector<int> N = {10};
  std::optional<double> D_tilde;  // default: sum of per-agent diameter bounds
  std::string y0 = "zero";        // zero | random:<scale>
  std::string x0 = "center";      // center | random
  double tau_scale = 1.0;         // multiplies every tau_k after construction
  std::int64_t T_max = kDefaultTMax;
  std::string convexity = "auto";  // auto | convex | strongly_convex
  std::vector<std::uint64_t> seeds = {0};
  std::string out = "results";
  bool assert_bounds = true;
  int snapshot_stride = 1;
  double reference_accuracy = 1e-8;
};

ExperimentConfig config_from_json(const json& j);
json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);

/// Everything fixed by the config except N and the seed.
struct Setup {
  Graph graph;
  Problem problem;
  ProblemConstants constants;
  SpectralConstants spectral;
  double D_tilde = 0.0;
  ScheduleMode mode = ScheduleMode::dpd_convex;
};

Setup prepare(const ExperimentConfig& cfg);
Schedules build_schedules(const ExperimentConfig& cfg, const Setup& setup, int N);
ValidationReport validate_cell(const ExperimentConfig& cfg, const Setup& setup, const Schedules& s);
InitialPoint initial_point(const ExperimentConfig& cfg, const Setup& setup);

/// Theorem inputs with the exact V(x0, x*) and the conservative |y* - y0| surrogate.
BoundInputs bound_inputs(const Setup& setup, const InitialPoint& init, const ReferenceSolution& ref, int N);

struct CellResult {
  int N = 0;
  std::uint64_t seed = 0;
  std::string dir;
  bool validated = false;
  bool bounds_ok = true;
  json summary;
};

struct ExperimentResult {
  std::vector<CellResult> cells;
  json aggregate;
  bool ok = true;  // false on any validator failure or enabled bound failure
};

/// Runs every (N, seed) cell and writes cell_N<N>_seed<s>/{manifest.json,
/// trace.csv, summary.json} below cfg.out, plus experiment.json.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Validates the schedules of every N without running.
json validate_experiment(const ExperimentConfig& cfg, bool& all_passed);

struct RateFit {
  std::vector<std::pair<double, double>> points;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least squares of log residual on log N.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

/// Groups summaries by (algorithm, mode), averages residuals over seeds per
/// N and fits both rates.
json fit_rates_from_summaries(const std::vector<std::string>& paths);

}  // namespace dcs
