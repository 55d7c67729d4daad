#include "mixedbo/bo_engine.hpp"

#include <algorithm>
#include <cmath>

#include "mixedbo/error.hpp"

namespace mixedbo {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Naive: return "naive";
    case Strategy::Basic: return "basic";
    case Strategy::Proposed: return "proposed";
  }
  return "unknown";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "naive") return Strategy::Naive;
  if (name == "basic") return Strategy::Basic;
  if (name == "proposed") return Strategy::Proposed;
  throw Error(ErrorCode::InvalidArgument, "unknown GP strategy '" + name + "'");
}

double BoState::incumbent() const {
  if (dataset.empty()) throw Error(ErrorCode::InsufficientData, "no observations yet");
  return *std::min_element(dataset.targets.begin(), dataset.targets.end());
}

Suggestion make_suggestion(const SearchSpace& space, Strategy strategy, RelaxedPoint argmax) {
  Suggestion s;
  s.eval_config = space.decode(argmax);
  s.stored_input = strategy == Strategy::Naive ? space.encode(s.eval_config) : argmax;
  s.acq_argmax = std::move(argmax);
  return s;
}

std::vector<Suggestion> initial_design(const SearchSpace& space, Strategy strategy, int n_init,
                                       Rng& rng) {
  if (n_init < 1) throw Error(ErrorCode::InvalidArgument, "n_init must be >= 1");
  std::vector<Suggestion> design;
  for (int i = 0; i < n_init; ++i) {
    design.push_back(make_suggestion(space, strategy, space.sample_uniform(rng)));
  }
  return design;
}

BoState make_state(std::shared_ptr<const SearchSpace> space, Strategy strategy,
                   const EngineConfig& config, std::uint64_t seed) {
  if (!space) throw Error(ErrorCode::InvalidArgument, "engine needs a search space");
  BoState state;
  state.space = std::move(space);
  state.strategy = strategy;
  state.config = config;
  state.n_init = config.n_init;
  state.rng.seed(seed);
  return state;
}

BoState initialize(std::shared_ptr<const SearchSpace> space, Strategy strategy, int n_init,
                   const Objective& objective, const EngineConfig& config, std::uint64_t seed) {
  EngineConfig cfg = config;
  cfg.n_init = n_init;
  BoState state = make_state(std::move(space), strategy, cfg, seed);
  for (const Suggestion& s : initial_design(*state.space, strategy, n_init, state.rng)) {
    double y = 0.0;
    try {
      y = objective(s.eval_config);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::Objective, "objective failed at " +
                                            state.space->config_to_json(s.eval_config).dump() +
                                            ": " + e.what());
    }
    state = tell(std::move(state), s, y);
  }
  state.iteration = 0;
  return state;
}

KernelSpec strategy_kernel(const BoState& state) {
  KernelSpec spec;
  spec.params.lengthscales.assign(state.space->encoded_width(), 1.0);
  spec.params.family = state.config.family;
  spec.transform_inputs = state.strategy == Strategy::Proposed;
  spec.space = state.space;
  return spec;
}

namespace {

SamplerOptions sampler_options(const BoState& state) {
  SamplerOptions opts = state.config.sampler;
  opts.fix_noise = state.config.noiseless;
  return opts;
}

AveragedPredictor predictor_from(const BoState& state, const std::vector<HyperSample>& samples) {
  const KernelSpec tmpl = strategy_kernel(state);
  std::vector<GpPosterior> posts;
  posts.reserve(samples.size());
  for (const auto& s : samples) {
    posts.push_back(GpPosterior::fit(state.dataset, with_hypers(tmpl, s), s.noise));
  }
  return AveragedPredictor(std::move(posts));
}

}  // namespace

AveragedPredictor fit_predictor(BoState& state) {
  if (state.dataset.empty()) throw Error(ErrorCode::InsufficientData, "no observations yet");
  const KernelSpec tmpl = strategy_kernel(state);
  // Each call re-runs the burn-in, starting from the previous chain's last state.
  SamplerOptions opts = sampler_options(state);
  state.last_samples =
      sample_hypers(state.dataset, tmpl, state.config.prior, opts, state.rng, state.chain);
  state.chain = state.last_samples.back();
  return predictor_from(state, state.last_samples);
}

Suggestion suggest(BoState& state) {
  const AveragedPredictor pred = fit_predictor(state);
  RelaxedPoint argmax =
      maximize_acquisition(pred, *state.space, state.incumbent(), state.config.budget, state.rng);
  return make_suggestion(*state.space, state.strategy, std::move(argmax));
}

BoState tell(BoState state, const Suggestion& sugg, double y) {
  if (!std::isfinite(y)) throw Error(ErrorCode::InvalidObservation, "observation is not finite");
  if (!state.space->contains(sugg.stored_input)) {
    throw Error(ErrorCode::InvalidArgument, "stored input lies outside the encoded box");
  }
  state.dataset.add(sugg.stored_input, y);
  state.iteration = static_cast<int>(state.dataset.size()) - state.n_init;
  return state;
}

Config recommend(BoState& state, RecommendMode mode) {
  if (state.dataset.empty()) throw Error(ErrorCode::InsufficientData, "no observations yet");
  if (mode == RecommendMode::BestObserved) {
    const auto& y = state.dataset.targets;
    const auto best = static_cast<std::size_t>(std::min_element(y.begin(), y.end()) - y.begin());
    return state.space->decode(state.dataset.inputs[best]);
  }
  const AveragedPredictor pred =
      state.last_samples.empty() ? fit_predictor(state) : predictor_from(state, state.last_samples);
  const RelaxedPoint argmin = maximize_over_box(
      [&](std::span<const double> x) { return -pred.averaged_mean(x); }, *state.space,
      state.config.budget, state.rng);
  return state.space->decode(argmin);
}

}  // namespace mixedbo
