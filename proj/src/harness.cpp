#include "mixedbo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "mixedbo/error.hpp"

namespace mixedbo {

namespace {

struct RepetitionOutput {
  std::vector<std::vector<RunRecord>> runs;  // one per strategy, in cfg order
  std::vector<RunFailure> failures;
  std::vector<double> run_best;  // external mode: lowest y seen by each run
};

OptimizerOptions optimizer_options(const ExperimentConfig& cfg) {
  OptimizerOptions opts;
  opts.engine.n_init = cfg.n_init;
  opts.engine.noiseless = !cfg.external() && cfg.noise_variance == 0.0;
  opts.engine.sampler.n_samples = cfg.hyper_samples;
  opts.engine.sampler.burn_in = cfg.burn_in;
  opts.engine.budget = cfg.budget;
  return opts;
}

RepetitionOutput run_repetition(const ExperimentConfig& cfg,
                                const std::shared_ptr<const SearchSpace>& space, int repetition) {
  RepetitionOutput out;
  out.runs.resize(cfg.strategies.size());
  out.run_best.assign(cfg.strategies.size(), std::numeric_limits<double>::infinity());
  const std::uint64_t rep_seed = cfg.seed + static_cast<std::uint64_t>(repetition);
  const OptimizerOptions opts = optimizer_options(cfg);

  std::optional<GpSampleObjective> objective;
  double f_min = 0.0;
  if (!cfg.external()) {
    try {
      objective.emplace(GpSampleObjective::with_default_truth(space, rep_seed));
      const int density = cfg.grid_density > 0 ? cfg.grid_density : default_grid_density(*space);
      f_min = objective->true_minimum(density).value;
    } catch (const std::exception& e) {
      for (auto kind : cfg.strategies) {
        out.failures.push_back({to_string(kind), repetition,
                                std::string("objective setup failed: ") + e.what()});
      }
      return out;
    }
  }

  const NoiseModel noise{cfg.noise_variance};
  for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
    const StrategyKind kind = cfg.strategies[s];
    const std::string name = to_string(kind);
    try {
      Optimizer opt(space, kind, opts, rep_seed);
      Rng noise_rng(mix_seed(rep_seed, 0x6e6f697365ULL));
      const auto evaluate = [&](const Config& c) {
        try {
          if (cfg.external()) {
            return run_external_objective(cfg.objective_cmd, space->config_to_json(c).dump());
          }
          return objective->query(c, noise, noise_rng);
        } catch (const std::exception& e) {
          throw Error(ErrorCode::Objective,
                      "objective failed at " + space->config_to_json(c).dump() + ": " + e.what());
        }
      };
      const RecommendMode mode =
          cfg.external() ? RecommendMode::BestObserved : RecommendMode::PosteriorMeanMin;

      for (int i = 0; i < cfg.n_init; ++i) {
        const Suggestion sugg = opt.ask();
        const double y = evaluate(sugg.eval_config);
        opt.tell(sugg, y);
        out.run_best[s] = std::min(out.run_best[s], y);
      }
      for (int it = 1; it <= cfg.iterations; ++it) {
        const Suggestion sugg = opt.ask();
        const double y = evaluate(sugg.eval_config);
        opt.tell(sugg, y);
        out.run_best[s] = std::min(out.run_best[s], y);

        RunRecord rec;
        rec.strategy = name;
        rec.repetition = repetition;
        rec.iteration = it;
        rec.suggested = sugg.acq_argmax;
        rec.eval_config = sugg.eval_config;
        rec.observed_y = y;
        rec.recommendation = opt.recommend(mode);
        if (cfg.external()) {
          rec.recommendation_value = out.run_best[s];
        } else {
          rec.recommendation_value = objective->latent(rec.recommendation);
          rec.regret = std::abs(rec.recommendation_value - f_min);
        }
        out.runs[s].push_back(std::move(rec));
      }
    } catch (const std::exception& e) {
      out.failures.push_back({name, repetition, e.what()});
    }
  }
  return out;
}

double log_regret(double regret, double floor) { return std::log10(regret + floor); }

double bootstrap_std_of_mean(const std::vector<double>& values, int samples, Rng& rng) {
  if (values.size() < 2 || samples < 2) return 0.0;
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  std::vector<double> means(static_cast<std::size_t>(samples));
  for (double& m : means) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) sum += values[pick(rng)];
    m = sum / static_cast<double>(values.size());
  }
  const double avg = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(samples);
  double ss = 0.0;
  for (double m : means) ss += (m - avg) * (m - avg);
  return std::sqrt(ss / static_cast<double>(samples - 1));
}

}  // namespace

void ExperimentConfig::validate() const {
  if (layout.has_value() == space.has_value()) {
    throw Error(ErrorCode::InvalidArgument, "exactly one of layout and space must be given");
  }
  if (strategies.empty()) throw Error(ErrorCode::InvalidArgument, "no strategies requested");
  std::set<StrategyKind> distinct(strategies.begin(), strategies.end());
  if (distinct.size() != strategies.size()) {
    throw Error(ErrorCode::InvalidArgument, "strategies must not repeat");
  }
  if (iterations < 1) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 1");
  if (repetitions < 1) throw Error(ErrorCode::InvalidArgument, "repetitions must be >= 1");
  if (!(noise_variance >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise must be >= 0");
  if (hyper_samples < 1) throw Error(ErrorCode::InvalidArgument, "hyper samples must be >= 1");
  if (burn_in < 0) throw Error(ErrorCode::InvalidArgument, "burn-in must be >= 0");
  if (bootstrap_samples < 1) throw Error(ErrorCode::InvalidArgument, "bootstrap samples must be >= 1");
  if (n_init < 1) throw Error(ErrorCode::InvalidArgument, "n_init must be >= 1");
  if (grid_density < 0) throw Error(ErrorCode::InvalidArgument, "grid density must be >= 0");
  if (!(regret_floor > 0.0)) throw Error(ErrorCode::InvalidArgument, "regret floor must be > 0");
}

std::shared_ptr<const SearchSpace> ExperimentConfig::resolved_space() const {
  if (layout) return std::make_shared<const SearchSpace>(make_experiment_space(*layout));
  if (space) return std::make_shared<const SearchSpace>(*space);
  throw Error(ErrorCode::InvalidArgument, "no layout or space given");
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    if (j.contains("layout")) cfg.layout = layout_from_string(j["layout"].get<std::string>());
    if (j.contains("space")) cfg.space = SearchSpace::from_json(j["space"]);
    if (j.contains("strategies")) {
      const auto& s = j["strategies"];
      std::vector<std::string> names;
      if (s.is_string()) {
        std::stringstream ss(s.get<std::string>());
        for (std::string tok; std::getline(ss, tok, ',');) {
          if (!tok.empty()) names.push_back(tok);
        }
      } else {
        names = s.get<std::vector<std::string>>();
      }
      for (const auto& n : names) cfg.strategies.push_back(strategy_kind_from_string(n));
    }
    cfg.iterations = j.value("iterations", cfg.iterations);
    cfg.repetitions = j.value("repetitions", cfg.repetitions);
    cfg.noise_variance = j.value("noise", cfg.noise_variance);
    cfg.hyper_samples = j.value("hyper_samples", cfg.hyper_samples);
    cfg.burn_in = j.value("burn_in", cfg.burn_in);
    cfg.bootstrap_samples = j.value("bootstrap", cfg.bootstrap_samples);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.output_dir = j.value("out", std::string());
    cfg.n_init = j.value("n_init", cfg.n_init);
    cfg.grid_density = j.value("grid_density", cfg.grid_density);
    cfg.objective_cmd = j.value("objective_cmd", std::string());
    cfg.threads = j.value("threads", cfg.threads);
    cfg.budget.n_random = j.value("n_random", cfg.budget.n_random);
    cfg.budget.n_starts = j.value("n_starts", cfg.budget.n_starts);
    cfg.budget.tol = j.value("tol", cfg.budget.tol);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed experiment JSON: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto space = cfg.resolved_space();
  const int n_rep = cfg.repetitions;
  std::vector<RepetitionOutput> outputs(static_cast<std::size_t>(n_rep));

  unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_rep));
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int r = next++; r < n_rep; r = next++) {
      outputs[static_cast<std::size_t>(r)] = run_repetition(cfg, space, r);
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  ExperimentResult result;
  for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
    for (auto& out : outputs) {
      for (auto& rec : out.runs[s]) result.records.push_back(std::move(rec));
    }
  }
  for (auto& out : outputs) {
    for (auto& f : out.failures) result.failures.push_back(std::move(f));
  }

  if (cfg.external()) {
    // Regret against the best value any run ever observed.
    double best = std::numeric_limits<double>::infinity();
    for (const auto& out : outputs) {
      for (double b : out.run_best) best = std::min(best, b);
    }
    for (auto& rec : result.records) rec.regret = rec.recommendation_value - best;
  }
  return result;
}

CurveSummary summarize(const std::vector<RunRecord>& records, int bootstrap_samples, Rng& rng,
                       double regret_floor) {
  std::vector<std::string> strategies;
  std::set<int> reps;
  int max_iter = 0;
  std::map<std::string, std::map<std::pair<int, int>, double>> cells;
  for (const auto& r : records) {
    if (std::find(strategies.begin(), strategies.end(), r.strategy) == strategies.end()) {
      strategies.push_back(r.strategy);
    }
    reps.insert(r.repetition);
    max_iter = std::max(max_iter, r.iteration);
    if (r.iteration < 1) throw Error(ErrorCode::InvalidArgument, "record iteration must be >= 1");
    if (!cells[r.strategy].emplace(std::make_pair(r.repetition, r.iteration), r.regret).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate record for " + r.strategy + " repetition " +
                                                  std::to_string(r.repetition) + " iteration " +
                                                  std::to_string(r.iteration));
    }
  }
  if (records.empty()) throw Error(ErrorCode::IncompleteGrid, "no records to summarize");

  std::vector<std::string> gaps;
  std::size_t n_gaps = 0;
  for (const auto& s : strategies) {
    for (int rep : reps) {
      for (int it = 1; it <= max_iter; ++it) {
        if (!cells[s].count({rep, it})) {
          if (gaps.size() < 20) {
            gaps.push_back(s + "/rep " + std::to_string(rep) + "/iter " + std::to_string(it));
          }
          ++n_gaps;
        }
      }
    }
  }
  if (n_gaps > 0) {
    std::string msg = std::to_string(n_gaps) + " missing cells:";
    for (const auto& g : gaps) msg += " " + g;
    if (n_gaps > gaps.size()) msg += " ...";
    throw Error(ErrorCode::IncompleteGrid, msg);
  }

  CurveSummary summary;
  for (const auto& s : strategies) {
    for (int it = 1; it <= max_iter; ++it) {
      std::vector<double> values;
      for (int rep : reps) values.push_back(log_regret(cells[s][{rep, it}], regret_floor));
      CurvePoint p;
      p.strategy = s;
      p.iteration = it;
      p.mean_log10_regret =
          std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
      p.bootstrap_std = bootstrap_std_of_mean(values, bootstrap_samples, rng);
      summary.points.push_back(p);
    }
  }
  return summary;
}

PairedDifference paired_difference(const std::vector<RunRecord>& records, const std::string& a,
                                   const std::string& b, int iteration, int bootstrap_samples,
                                   Rng& rng, double regret_floor) {
  std::map<int, double> va, vb;
  for (const auto& r : records) {
    if (r.iteration != iteration) continue;
    if (r.strategy == a) va[r.repetition] = log_regret(r.regret, regret_floor);
    if (r.strategy == b) vb[r.repetition] = log_regret(r.regret, regret_floor);
  }
  std::vector<double> diffs;
  for (const auto& [rep, x] : va) {
    if (const auto it = vb.find(rep); it != vb.end()) diffs.push_back(x - it->second);
  }
  if (diffs.empty()) {
    throw Error(ErrorCode::IncompleteGrid, "no paired repetitions for " + a + " and " + b);
  }
  PairedDifference out;
  out.repetitions = static_cast<int>(diffs.size());
  out.mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) / static_cast<double>(diffs.size());
  out.bootstrap_std = bootstrap_std_of_mean(diffs, bootstrap_samples, rng);
  return out;
}

void emit_outputs(const CurveSummary& summary, const std::vector<RunRecord>& records,
                  const SearchSpace& space, const std::filesystem::path& outdir) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + outdir.string() + ": " + ec.message());
  write_text_file(outdir / "records.csv", records_to_csv(records, space));
  write_text_file(outdir / "summary.csv", summary_to_csv(summary));
  write_text_file(outdir / "regret.svg", summary_to_svg(summary, "log10 regret"));
}

}  // namespace mixedbo
