#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "mixedbo/kernels.hpp"

namespace mixedbo {

enum class Layout { TwoDInteger, TwoDCategorical, FourDInteger, FourDCategorical };

Layout layout_from_string(const std::string& name);  // "2d-int", "2d-cat", "4d-int", "4d-cat"
const char* to_string(Layout layout);
SearchSpace make_experiment_space(Layout layout);
/// Real-dimension grid resolution used to locate the regret reference.
int default_grid_density(Layout layout);
/// Grid resolution for an arbitrary space: 200 with at most one real
/// dimension, otherwise the largest density keeping the grid near 2500 points.
int default_grid_density(const SearchSpace& space);

struct NoiseModel {
  double variance = 0.0;
};

struct GridMinimum {
  Config config;
  double value = 0.0;
};

/// A function drawn from a zero-mean GP prior, materialized lazily: each new
/// configuration is drawn from the prior conditioned on every value drawn so
/// far, and memoized. The standard normal behind each draw comes from a
/// stream keyed by (seed, configuration), so a fixed query sequence always
/// yields the same function.
class GpSampleObjective {
 public:
  GpSampleObjective(std::shared_ptr<const SearchSpace> space, KernelParams truth,
                    std::uint64_t seed, std::size_t grid_cap = 1'000'000);

  /// Ground truth from the default hyperparameters: amplitude 1, every
  /// lengthscale 0.3, Matérn 3/2, transformed inputs.
  static GpSampleObjective with_default_truth(std::shared_ptr<const SearchSpace> space,
                                              std::uint64_t seed);

  /// Noiseless function value.
  double latent(const Config& config);
  /// latent(config) plus Normal(0, noise.variance) drawn from `rng`.
  double query(const Config& config, const NoiseModel& noise, Rng& rng);

  /// Enumerates every grid configuration (real dims at `grid_density`
  /// evenly spaced points including both bounds) and returns the smallest
  /// latent value.
  GridMinimum true_minimum(int grid_density);

  /// All configurations of the grid, in enumeration order.
  std::vector<Config> grid(int grid_density) const;

  const SearchSpace& space() const { return *space_; }
  const KernelSpec& spec() const { return spec_; }
  std::size_t memo_size() const { return values_.size(); }
  const std::vector<double>& memo_values() const { return values_; }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<double>& key) const noexcept;
  };

  double draw_standard_normal(const std::vector<double>& key) const;

  std::shared_ptr<const SearchSpace> space_;
  KernelSpec spec_;
  std::uint64_t seed_;
  std::size_t grid_cap_;
  double jitter_;

  std::vector<std::vector<double>> points_;  // transformed encodings, in draw order
  std::vector<double> values_;
  std::vector<double> whitened_;              // L^-1 f; equals the draws' normals
  std::vector<std::vector<double>> chol_rows_;  // packed lower Cholesky factor
  std::unordered_map<std::vector<double>, std::size_t, KeyHash> index_;
};

/// splitmix64 finalizer, used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace mixedbo
