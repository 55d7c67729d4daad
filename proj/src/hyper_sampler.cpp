#include "mixedbo/hyper_sampler.hpp"

#include <cmath>
#include <limits>

#include "mixedbo/error.hpp"

namespace mixedbo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxStepOut = 32;
constexpr int kMaxShrink = 1000;

double log_posterior(const Dataset& data, const KernelSpec& spec_template, const HyperPrior& prior,
                     const HyperSample& s, bool noise_free) {
  double lp = 0.0;
  for (double l : s.lengthscales) lp += prior.lengthscale.log_density(l);
  lp += prior.amplitude.log_density(s.amplitude);
  if (!noise_free) lp += prior.noise.log_density(s.noise);
  if (!std::isfinite(lp)) return kNegInf;
  try {
    const double ll = log_marginal_likelihood(data, with_hypers(spec_template, s), s.noise);
    return std::isfinite(ll) ? lp + ll : kNegInf;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SingularModel) return kNegInf;
    throw;
  }
}

}  // namespace

double LogNormalPrior::log_density(double value) const {
  if (!(value > 0.0)) return kNegInf;
  const double z = (std::log(value) - log_mean) / log_std;
  return -0.5 * z * z - std::log(value) - std::log(log_std) - 0.9189385332046727;
}

void HyperPrior::validate() const {
  for (const auto* p : {&lengthscale, &amplitude, &noise}) {
    if (!(p->log_std > 0.0)) throw Error(ErrorCode::InvalidArgument, "prior log-std must be > 0");
  }
}

KernelSpec with_hypers(const KernelSpec& spec_template, const HyperSample& sample) {
  KernelSpec spec = spec_template;
  spec.params.lengthscales = sample.lengthscales;
  spec.params.amplitude = sample.amplitude;
  return spec;
}

double slice_sample_step(double current, const std::function<double(double)>& log_density,
                         Rng& rng, double step_width) {
  if (!(current > 0.0) || !(step_width > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "slice sampling needs a positive state and width");
  }
  const auto target = [&](double u) {
    const double v = log_density(std::exp(u));
    return std::isnan(v) ? kNegInf : v + u;
  };
  const double u0 = std::log(current);
  const double g0 = target(u0);
  if (!std::isfinite(g0)) {
    throw Error(ErrorCode::InvalidArgument, "log density is not finite at the current state");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  const double level = g0 - expo(rng);

  double left = u0 - step_width * unit(rng);
  double right = left + step_width;
  int j = static_cast<int>(std::floor(kMaxStepOut * unit(rng)));
  int k = kMaxStepOut - 1 - j;
  while (j-- > 0 && target(left) > level) left -= step_width;
  while (k-- > 0 && target(right) > level) right += step_width;

  for (int shrink = 0; shrink < kMaxShrink; ++shrink) {
    const double u1 = left + unit(rng) * (right - left);
    if (target(u1) > level) return std::exp(u1);
    if (u1 < u0) {
      left = u1;
    } else {
      right = u1;
    }
  }
  throw Error(ErrorCode::SamplerStuck, "slice sampler exceeded 1000 shrinkage steps");
}

std::vector<HyperSample> sample_hypers(const Dataset& data, const KernelSpec& spec_template,
                                       const HyperPrior& prior, const SamplerOptions& options,
                                       Rng& rng, const std::optional<HyperSample>& start) {
  if (options.n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n_samples must be >= 1");
  if (options.burn_in < 0 || options.thin < 1) {
    throw Error(ErrorCode::InvalidArgument, "burn_in must be >= 0 and thin >= 1");
  }
  prior.validate();
  const std::size_t width = spec_template.params.lengthscales.size();

  HyperSample state;
  if (start) {
    state = *start;
  } else {
    state.lengthscales.assign(width, 1.0);
    state.amplitude = 1.0;
    state.noise = options.fix_noise ? options.fixed_noise : std::exp(prior.noise.log_mean);
  }
  if (state.lengthscales.size() != width) {
    throw Error(ErrorCode::Dimension, "warm-start sample has the wrong number of lengthscales");
  }
  if (options.fix_noise) state.noise = options.fixed_noise;

  // A start that the data cannot support (e.g. singular Gram matrix) falls
  // back to the prior medians.
  if (!std::isfinite(log_posterior(data, spec_template, prior, state, options.fix_noise))) {
    state.lengthscales.assign(width, std::exp(prior.lengthscale.log_mean));
    state.amplitude = std::exp(prior.amplitude.log_mean);
    if (!options.fix_noise) state.noise = std::exp(prior.noise.log_mean);
    if (!std::isfinite(log_posterior(data, spec_template, prior, state, options.fix_noise))) {
      throw Error(ErrorCode::SingularModel, "no finite starting state for the hyperparameter chain");
    }
  }

  const auto update = [&](double& slot) {
    const auto density = [&](double value) {
      const double saved = slot;
      slot = value;
      const double lp = log_posterior(data, spec_template, prior, state, options.fix_noise);
      slot = saved;
      return lp;
    };
    slot = slice_sample_step(slot, density, rng, options.step_width);
  };
  const auto sweep = [&] {
    for (std::size_t j = 0; j < width; ++j) update(state.lengthscales[j]);
    update(state.amplitude);
    if (!options.fix_noise) update(state.noise);
  };

  for (int b = 0; b < options.burn_in; ++b) sweep();
  std::vector<HyperSample> samples;
  samples.reserve(static_cast<std::size_t>(options.n_samples));
  for (int s = 0; s < options.n_samples; ++s) {
    for (int t = 0; t < options.thin; ++t) sweep();
    samples.push_back(state);
  }
  return samples;
}

}  // namespace mixedbo
