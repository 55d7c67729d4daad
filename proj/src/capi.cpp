#include "mixedbo/mixedbo.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>

#include "mixedbo/error.hpp"
#include "mixedbo/harness.hpp"
#include "mixedbo/optimizer.hpp"

struct mbo_space {
  std::shared_ptr<const mixedbo::SearchSpace> space;
};

struct mbo_optimizer {
  mixedbo::Optimizer opt;
  std::optional<mixedbo::Suggestion> pending;
};

namespace {

thread_local std::string g_last_error;

mbo_status status_of(mixedbo::ErrorCode code) {
  using mixedbo::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return MBO_ERR_INVALID_ARGUMENT;
    case ErrorCode::InvalidConfig: return MBO_ERR_INVALID_CONFIG;
    case ErrorCode::Dimension: return MBO_ERR_DIMENSION;
    case ErrorCode::SingularModel: return MBO_ERR_SINGULAR_MODEL;
    case ErrorCode::SamplerStuck: return MBO_ERR_SAMPLER_STUCK;
    case ErrorCode::InsufficientData: return MBO_ERR_INSUFFICIENT_DATA;
    case ErrorCode::InvalidObservation: return MBO_ERR_INVALID_OBSERVATION;
    case ErrorCode::GridTooLarge: return MBO_ERR_GRID_TOO_LARGE;
    case ErrorCode::IncompleteGrid: return MBO_ERR_INCOMPLETE_GRID;
    case ErrorCode::Io: return MBO_ERR_IO;
    case ErrorCode::Objective: return MBO_ERR_OBJECTIVE;
  }
  return MBO_ERR_INTERNAL;
}

mbo_status fail(mbo_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class F>
mbo_status guarded(F&& body) {
  try {
    body();
    return MBO_OK;
  } catch (const mixedbo::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(MBO_ERR_INVALID_ARGUMENT, std::string("JSON error: ") + e.what());
  } catch (const std::exception& e) {
    return fail(MBO_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MBO_ERR_INTERNAL, "unknown exception");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw mixedbo::Error(mixedbo::ErrorCode::InvalidArgument, what);
}

mixedbo::OptimizerOptions options_from_json(const char* options_json) {
  mixedbo::OptimizerOptions opts;
  if (!options_json || !*options_json) return opts;
  const auto j = nlohmann::json::parse(options_json);
  require(j.is_object(), "options must be a JSON object");
  auto& e = opts.engine;
  e.n_init = j.value("n_init", e.n_init);
  e.sampler.n_samples = j.value("hyper_samples", e.sampler.n_samples);
  e.sampler.burn_in = j.value("burn_in", e.sampler.burn_in);
  e.noiseless = j.value("noiseless", e.noiseless);
  e.budget.n_random = j.value("n_random", e.budget.n_random);
  e.budget.n_starts = j.value("n_starts", e.budget.n_starts);
  e.budget.tol = j.value("tol", e.budget.tol);
  if (j.contains("family")) {
    const auto family = j["family"].get<std::string>();
    if (family == "matern32") {
      e.family = mixedbo::KernelFamily::Matern32;
    } else if (family == "se") {
      e.family = mixedbo::KernelFamily::SquaredExponential;
    } else {
      throw mixedbo::Error(mixedbo::ErrorCode::InvalidArgument, "unknown kernel family '" + family + "'");
    }
  }
  opts.tpe.gamma = j.value("gamma", opts.tpe.gamma);
  opts.tpe.n_candidates = j.value("n_candidates", opts.tpe.n_candidates);
  opts.tpe.prior_weight = j.value("prior_weight", opts.tpe.prior_weight);
  require(e.n_init >= 1, "n_init must be >= 1");
  return opts;
}

}  // namespace

extern "C" {

const char* mbo_version(void) { return "0.1.0"; }

const char* mbo_last_error(void) { return g_last_error.c_str(); }

const char* mbo_status_string(mbo_status status) {
  switch (status) {
    case MBO_OK: return "ok";
    case MBO_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case MBO_ERR_INVALID_CONFIG: return "invalid-config";
    case MBO_ERR_DIMENSION: return "dimension";
    case MBO_ERR_SINGULAR_MODEL: return "singular-model";
    case MBO_ERR_SAMPLER_STUCK: return "sampler-stuck";
    case MBO_ERR_INSUFFICIENT_DATA: return "insufficient-data";
    case MBO_ERR_INVALID_OBSERVATION: return "invalid-observation";
    case MBO_ERR_GRID_TOO_LARGE: return "grid-too-large";
    case MBO_ERR_INCOMPLETE_GRID: return "incomplete-grid";
    case MBO_ERR_IO: return "io";
    case MBO_ERR_OBJECTIVE: return "objective";
    case MBO_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void mbo_string_free(char* s) { std::free(s); }

mbo_status mbo_space_from_json(const char* json, mbo_space** out) {
  return guarded([&] {
    require(json && out, "null argument");
    auto space = mixedbo::SearchSpace::from_json(nlohmann::json::parse(json));
    *out = new mbo_space{std::make_shared<const mixedbo::SearchSpace>(std::move(space))};
  });
}

mbo_status mbo_space_from_layout(const char* layout, mbo_space** out) {
  return guarded([&] {
    require(layout && out, "null argument");
    auto space = mixedbo::make_experiment_space(mixedbo::layout_from_string(layout));
    *out = new mbo_space{std::make_shared<const mixedbo::SearchSpace>(std::move(space))};
  });
}

void mbo_space_free(mbo_space* space) { delete space; }

size_t mbo_space_encoded_width(const mbo_space* space) {
  return space ? space->space->encoded_width() : 0;
}

mbo_status mbo_space_to_json(const mbo_space* space, char** out_json) {
  return guarded([&] {
    require(space && out_json, "null argument");
    *out_json = dup_string(space->space->to_json().dump());
  });
}

mbo_status mbo_space_encode(const mbo_space* space, const char* config_json, double* out,
                            size_t width) {
  return guarded([&] {
    require(space && config_json && out, "null argument");
    const auto& s = *space->space;
    if (width != s.encoded_width()) {
      throw mixedbo::Error(mixedbo::ErrorCode::Dimension, "output buffer width does not match the space");
    }
    const auto p = s.encode(s.config_from_json(nlohmann::json::parse(config_json)));
    std::copy(p.begin(), p.end(), out);
  });
}

mbo_status mbo_space_transform(const mbo_space* space, const double* point, double* out,
                               size_t width) {
  return guarded([&] {
    require(space && point && out, "null argument");
    const auto t = space->space->transform(std::span<const double>(point, width));
    std::copy(t.begin(), t.end(), out);
  });
}

mbo_status mbo_space_decode(const mbo_space* space, const double* point, size_t width,
                            char** out_config_json) {
  return guarded([&] {
    require(space && point && out_config_json, "null argument");
    const auto& s = *space->space;
    const std::span<const double> p(point, width);
    if (!s.contains(p)) {
      throw mixedbo::Error(mixedbo::ErrorCode::Dimension, "point is not inside the encoded box");
    }
    *out_config_json = dup_string(s.config_to_json(s.decode(p)).dump());
  });
}

mbo_status mbo_optimizer_create(const mbo_space* space, const char* strategy, uint64_t seed,
                                const char* options_json, mbo_optimizer** out) {
  return guarded([&] {
    require(space && strategy && out, "null argument");
    *out = new mbo_optimizer{mixedbo::Optimizer(space->space,
                                                mixedbo::strategy_kind_from_string(strategy),
                                                options_from_json(options_json), seed),
                             std::nullopt};
  });
}

void mbo_optimizer_free(mbo_optimizer* opt) { delete opt; }

mbo_status mbo_optimizer_ask(mbo_optimizer* opt, char** out_config_json) {
  return guarded([&] {
    require(opt && out_config_json, "null argument");
    if (!opt->pending) opt->pending = opt->opt.ask();
    *out_config_json = dup_string(opt->opt.space().config_to_json(opt->pending->eval_config).dump());
  });
}

mbo_status mbo_optimizer_tell(mbo_optimizer* opt, double y) {
  return guarded([&] {
    require(opt, "null argument");
    if (!opt->pending) {
      throw mixedbo::Error(mixedbo::ErrorCode::InvalidArgument, "tell without a pending ask");
    }
    opt->opt.tell(*opt->pending, y);
    opt->pending.reset();
  });
}

mbo_status mbo_optimizer_observe(mbo_optimizer* opt, const char* config_json, double y) {
  return guarded([&] {
    require(opt && config_json, "null argument");
    opt->opt.observe(opt->opt.space().config_from_json(nlohmann::json::parse(config_json)), y);
    opt->pending.reset();
  });
}

mbo_status mbo_optimizer_load_history(mbo_optimizer* opt, const char* records_csv_path,
                                      size_t* out_rows) {
  return guarded([&] {
    require(opt && records_csv_path, "null argument");
    const auto records =
        mixedbo::records_from_csv(mixedbo::read_text_file(records_csv_path), opt->opt.space());
    for (const auto& r : records) opt->opt.observe(r.eval_config, r.observed_y);
    opt->pending.reset();
    if (out_rows) *out_rows = records.size();
  });
}

mbo_status mbo_optimizer_recommend(mbo_optimizer* opt, mbo_recommend_mode mode,
                                   char** out_config_json) {
  return guarded([&] {
    require(opt && out_config_json, "null argument");
    const auto m = mode == MBO_RECOMMEND_BEST_OBSERVED ? mixedbo::RecommendMode::BestObserved
                                                       : mixedbo::RecommendMode::PosteriorMeanMin;
    *out_config_json = dup_string(opt->opt.space().config_to_json(opt->opt.recommend(m)).dump());
  });
}

size_t mbo_optimizer_num_observations(const mbo_optimizer* opt) {
  return opt ? opt->opt.num_observations() : 0;
}

mbo_status mbo_experiment_run(const char* config_json, char** out_report_json) {
  return guarded([&] {
    require(config_json, "null argument");
    const auto cfg = mixedbo::ExperimentConfig::from_json(nlohmann::json::parse(config_json));
    const auto space = cfg.resolved_space();
    const auto result = mixedbo::run_experiment(cfg);

    nlohmann::json report;
    report["failures"] = nlohmann::json::array();
    for (const auto& f : result.failures) {
      report["failures"].push_back(
          {{"strategy", f.strategy}, {"repetition", f.repetition}, {"message", f.message}});
    }
    const bool write = !cfg.output_dir.empty();
    if (write) {
      std::error_code ec;
      std::filesystem::create_directories(cfg.output_dir, ec);
      if (ec) {
        throw mixedbo::Error(mixedbo::ErrorCode::Io,
                             "cannot create " + cfg.output_dir.string() + ": " + ec.message());
      }
      mixedbo::write_text_file(cfg.output_dir / "records.csv",
                               mixedbo::records_to_csv(result.records, *space));
    }
    if (!result.failures.empty()) {
      if (out_report_json) *out_report_json = dup_string(report.dump(2));
      std::string msg = std::to_string(result.failures.size()) + " run(s) failed; first: " +
                        result.failures.front().strategy + " repetition " +
                        std::to_string(result.failures.front().repetition) + ": " +
                        result.failures.front().message;
      throw mixedbo::Error(mixedbo::ErrorCode::IncompleteGrid, msg);
    }
    mixedbo::Rng rng(mixedbo::mix_seed(cfg.seed, 0x73756d6d617279ULL));
    const auto summary =
        mixedbo::summarize(result.records, cfg.bootstrap_samples, rng, cfg.regret_floor);
    if (write) mixedbo::emit_outputs(summary, result.records, *space, cfg.output_dir);

    report["final"] = nlohmann::json::array();
    for (const auto& p : summary.points) {
      if (p.iteration != cfg.iterations) continue;
      report["final"].push_back({{"strategy", p.strategy},
                                 {"iteration", p.iteration},
                                 {"mean_log10_regret", p.mean_log10_regret},
                                 {"bootstrap_std", p.bootstrap_std}});
    }
    if (out_report_json) *out_report_json = dup_string(report.dump(2));
  });
}

mbo_status mbo_experiment_summarize(const mbo_space* space, const char* const* records_paths,
                                    int bootstrap_samples, uint64_t seed, const char* out_dir) {
  return guarded([&] {
    require(space && records_paths && out_dir, "null argument");
    std::vector<mixedbo::RunRecord> records;
    for (const char* const* p = records_paths; *p; ++p) {
      auto part = mixedbo::records_from_csv(mixedbo::read_text_file(*p), *space->space);
      records.insert(records.end(), std::make_move_iterator(part.begin()),
                     std::make_move_iterator(part.end()));
    }
    require(bootstrap_samples >= 1, "bootstrap samples must be >= 1");
    mixedbo::Rng rng(mixedbo::mix_seed(seed, 0x73756d6d617279ULL));
    const auto summary = mixedbo::summarize(records, bootstrap_samples, rng);
    mixedbo::emit_outputs(summary, records, *space->space, out_dir);
  });
}

}  // extern "C"
