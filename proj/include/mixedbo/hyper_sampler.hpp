#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mixedbo/gp_model.hpp"

namespace mixedbo {

/// One draw of the GP hyperparameters.
struct HyperSample {
  std::vector<double> lengthscales;
  double amplitude = 1.0;
  double noise = 1e-6;

  bool operator==(const HyperSample&) const = default;
};

struct LogNormalPrior {
  double log_mean = 0.0;
  double log_std = 1.0;

  /// Log density over the positive parameter itself (not its log).
  double log_density(double value) const;
};

struct HyperPrior {
  LogNormalPrior lengthscale{0.0, 1.0};
  LogNormalPrior amplitude{0.0, 1.0};
  LogNormalPrior noise{-4.0, 1.0};

  void validate() const;
};

struct SamplerOptions {
  int n_samples = 10;
  int burn_in = 50;  // sweeps discarded before the first kept sample
  int thin = 1;      // sweeps between kept samples
  double step_width = 1.0;  // initial bracket width in log-parameter space
  bool fix_noise = false;   // noiseless mode
  double fixed_noise = 1e-6;
};

/// One univariate slice-sampling update of a positive parameter. The slice is
/// built over u = log(value), with the log-Jacobian added, so the returned
/// value is distributed according to `log_density` (a density over `value`).
/// Throws SamplerStuck after 1000 shrinkage steps.
double slice_sample_step(double current, const std::function<double(double)>& log_density,
                         Rng& rng, double step_width);

/// Coordinate-wise slice sampling over (lengthscales, amplitude, noise)
/// against the GP log evidence plus log prior. `start` warm-starts the chain;
/// the last returned sample is the chain's final state.
std::vector<HyperSample> sample_hypers(const Dataset& data, const KernelSpec& spec_template,
                                       const HyperPrior& prior, const SamplerOptions& options,
                                       Rng& rng, const std::optional<HyperSample>& start = {});

KernelSpec with_hypers(const KernelSpec& spec_template, const HyperSample& sample);

}  // namespace mixedbo
