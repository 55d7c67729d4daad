#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mixedbo/optimizer.hpp"
#include "mixedbo/synthetic.hpp"

namespace mixedbo {

struct ExperimentConfig {
  std::optional<Layout> layout;     // one of layout / space must be set
  std::optional<SearchSpace> space;
  std::vector<StrategyKind> strategies;
  int iterations = 50;
  int repetitions = 100;
  double noise_variance = 0.0;
  int hyper_samples = 10;
  int burn_in = 50;
  int bootstrap_samples = 200;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  int n_init = 3;
  int grid_density = 0;  // 0 = layout/space default
  std::string objective_cmd;  // external objective; empty = GP-draw objective
  int threads = 0;            // 0 = hardware concurrency
  OptBudget budget;
  double regret_floor = 1e-8;

  void validate() const;
  std::shared_ptr<const SearchSpace> resolved_space() const;
  bool external() const { return !objective_cmd.empty(); }
  /// ExperimentConfig as JSON (the C API accepts the same keys).
  static ExperimentConfig from_json(const nlohmann::json& j);
};

struct RunRecord {
  std::string strategy;
  int repetition = 0;
  int iteration = 0;
  RelaxedPoint suggested;
  Config eval_config;
  double observed_y = 0.0;
  Config recommendation;
  double recommendation_value = 0.0;
  double regret = 0.0;
};

struct RunFailure {
  std::string strategy;
  int repetition = 0;
  std::string message;
};

struct ExperimentResult {
  std::vector<RunRecord> records;  // ordered by (strategy order, repetition, iteration)
  std::vector<RunFailure> failures;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct CurvePoint {
  std::string strategy;
  int iteration = 0;
  double mean_log10_regret = 0.0;
  double bootstrap_std = 0.0;
};

struct CurveSummary {
  std::vector<CurvePoint> points;  // strategy-major, iteration-minor
};

/// log10(regret + floor) averaged over repetitions, with the standard
/// deviation of that mean over `bootstrap_samples` resamples of the
/// repetitions. Throws IncompleteGrid when some (strategy, repetition,
/// iteration) cell is missing.
CurveSummary summarize(const std::vector<RunRecord>& records, int bootstrap_samples, Rng& rng,
                       double regret_floor = 1e-8);

struct PairedDifference {
  double mean = 0.0;           // mean over repetitions of log10 regret (a) - (b)
  double bootstrap_std = 0.0;  // bootstrap std of that mean
  int repetitions = 0;
};

/// Paired comparison of two strategies at one iteration.
PairedDifference paired_difference(const std::vector<RunRecord>& records, const std::string& a,
                                   const std::string& b, int iteration, int bootstrap_samples,
                                   Rng& rng, double regret_floor = 1e-8);

/// Writes records.csv, summary.csv and regret.svg into `outdir`.
void emit_outputs(const CurveSummary& summary, const std::vector<RunRecord>& records,
                  const SearchSpace& space, const std::filesystem::path& outdir);

// records.csv / summary.csv / SVG serialization.
std::string records_to_csv(const std::vector<RunRecord>& records, const SearchSpace& space);
std::vector<RunRecord> records_from_csv(const std::string& text, const SearchSpace& space);
std::string summary_to_csv(const CurveSummary& summary);
std::string summary_to_svg(const CurveSummary& summary, const std::string& title);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Runs `command` through /bin/sh, writes one JSON config line to its
/// standard input and parses one number from its standard output.
double run_external_objective(const std::string& command, const std::string& config_json);

}  // namespace mixedbo
