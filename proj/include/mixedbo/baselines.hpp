#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "mixedbo/search_space.hpp"

namespace mixedbo {

struct Observation {
  Config config;
  double y = 0.0;
};

struct TpeConfig {
  double gamma = 0.25;
  int n_candidates = 24;
  double prior_weight = 1.0;
  double min_bandwidth_fraction = 0.01;  // continuous bandwidths, fractions of the range
  double max_bandwidth_fraction = 1.0;

  void validate() const;
};

/// Mixture of Gaussian bumps truncated to [lower, upper] plus a uniform
/// component carrying `prior_weight`.
struct ContinuousParzen {
  double lower = 0.0;
  double upper = 1.0;
  std::vector<double> centers;
  std::vector<double> bandwidths;
  double prior_weight = 1.0;

  double pdf(double x) const;
  double sample(Rng& rng) const;
};

/// Smoothed categorical: probabilities over integer values or label indices.
struct DiscreteParzen {
  std::vector<double> probabilities;

  double pmf(std::size_t index) const { return probabilities[index]; }
  std::size_t sample(Rng& rng) const;
};

using DimensionDensity = std::variant<ContinuousParzen, DiscreteParzen>;

/// Product of independent per-dimension densities.
struct ParzenDensity {
  std::vector<DimensionDensity> dims;

  double log_density(const SearchSpace& space, const Config& config) const;
  Config sample(const SearchSpace& space, Rng& rng) const;
};

struct ObservationSplit {
  std::vector<Observation> lower;  // y <= y*, builds l(x)
  std::vector<Observation> upper;  // the rest, builds g(x)
  double threshold = 0.0;          // y*
};

/// y* is the y at 1-based position ceil(gamma * N) of the sorted values.
ObservationSplit split_observations(const std::vector<Observation>& data, double gamma);

ParzenDensity fit_parzen(const std::vector<Config>& observations, const SearchSpace& space,
                         const TpeConfig& config);

/// Draws candidates from l(x) and returns the one maximizing log l - log g.
/// Falls back to uniform sampling with fewer than two observations.
Config tpe_suggest(const std::vector<Observation>& data, const SearchSpace& space,
                   const TpeConfig& config, Rng& rng);

/// Candidate scoring used by tpe_suggest, exposed for testing. Returns the
/// index of the best candidate (earliest on ties).
std::size_t tpe_select(const std::vector<Config>& candidates, const ParzenDensity& good,
                       const ParzenDensity& bad, const SearchSpace& space);

Config random_suggest(const SearchSpace& space, Rng& rng);

}  // namespace mixedbo
