#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mixedbo/acquisition.hpp"
#include "mixedbo/hyper_sampler.hpp"

namespace mixedbo {

/// How the GP copes with integer and categorical dimensions.
///  - Naive: the objective is evaluated at the snapped point and the snapped
///    point is what the GP stores.
///  - Basic: the snapping happens only inside the objective wrapper; the GP
///    stores the continuous argmax of the acquisition.
///  - Proposed: as Basic, but the covariance sees T(x) instead of x.
enum class Strategy { Naive, Basic, Proposed };

enum class RecommendMode { PosteriorMeanMin, BestObserved };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

struct EngineConfig {
  KernelFamily family = KernelFamily::Matern32;
  int n_init = 3;
  HyperPrior prior;
  SamplerOptions sampler;
  OptBudget budget;
  bool noiseless = false;
};

struct Suggestion {
  RelaxedPoint acq_argmax;
  Config eval_config;
  RelaxedPoint stored_input;
};

struct BoState {
  std::shared_ptr<const SearchSpace> space;
  Strategy strategy = Strategy::Proposed;
  EngineConfig config;
  Dataset dataset;
  int n_init = 0;
  int iteration = 0;  // |dataset| - n_init once the initial design is in
  Rng rng;
  std::optional<HyperSample> chain;        // last state of the hyperparameter chain
  std::vector<HyperSample> last_samples;  // samples behind the latest suggestion

  double incumbent() const;
};

using Objective = std::function<double(const Config&)>;

/// Fills the Suggestion fields for a relaxed point according to the strategy.
Suggestion make_suggestion(const SearchSpace& space, Strategy strategy, RelaxedPoint argmax);

/// Uniform initial design; these points are suggestions like any other.
std::vector<Suggestion> initial_design(const SearchSpace& space, Strategy strategy, int n_init,
                                       Rng& rng);

/// Empty state; use `initialize` to also evaluate the initial design.
BoState make_state(std::shared_ptr<const SearchSpace> space, Strategy strategy,
                   const EngineConfig& config, std::uint64_t seed);

BoState initialize(std::shared_ptr<const SearchSpace> space, Strategy strategy, int n_init,
                   const Objective& objective, const EngineConfig& config, std::uint64_t seed);

KernelSpec strategy_kernel(const BoState& state);

/// Samples hyperparameters, averages EI over them and maximizes it over the box.
Suggestion suggest(BoState& state);

/// Returns the state with (stored_input, y) appended.
BoState tell(BoState state, const Suggestion& sugg, double y);

/// Runs the hyperparameter chain for the current data and returns the
/// corresponding posteriors.
AveragedPredictor fit_predictor(BoState& state);

Config recommend(BoState& state, RecommendMode mode);

}  // namespace mixedbo
