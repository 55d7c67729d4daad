#include "mixedbo/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mixedbo/error.hpp"

namespace mixedbo {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double phi(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }
double Phi(double z) { return 0.5 * std::erfc(-z * 0.7071067811865476); }

DiscreteParzen smoothed_counts(const std::vector<std::size_t>& indices, std::size_t n_values,
                               double prior_weight) {
  DiscreteParzen d;
  d.probabilities.assign(n_values, prior_weight);
  for (std::size_t i : indices) d.probabilities[i] += 1.0;
  const double total = std::accumulate(d.probabilities.begin(), d.probabilities.end(), 0.0);
  for (double& p : d.probabilities) p = total > 0.0 ? p / total : 1.0 / static_cast<double>(n_values);
  return d;
}

}  // namespace

void TpeConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0, 1)");
  if (n_candidates < 1) throw Error(ErrorCode::InvalidArgument, "n_candidates must be >= 1");
  if (!(prior_weight >= 0.0)) throw Error(ErrorCode::InvalidArgument, "prior_weight must be >= 0");
}

double ContinuousParzen::pdf(double x) const {
  if (x < lower || x > upper) return 0.0;
  const double n = static_cast<double>(centers.size());
  double w_prior = prior_weight;
  if (centers.empty() && w_prior <= 0.0) w_prior = 1.0;
  double sum = w_prior / (upper - lower);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double h = bandwidths[i];
    const double mass = Phi((upper - centers[i]) / h) - Phi((lower - centers[i]) / h);
    sum += phi((x - centers[i]) / h) / (h * mass);
  }
  return sum / (n + w_prior);
}

double ContinuousParzen::sample(Rng& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double n = static_cast<double>(centers.size());
  const double w_prior = (centers.empty() && prior_weight <= 0.0) ? 1.0 : prior_weight;
  const double pick = unit(rng) * (n + w_prior);
  if (pick >= n) return lower + unit(rng) * (upper - lower);
  const std::size_t i = std::min(centers.size() - 1, static_cast<std::size_t>(pick));
  std::normal_distribution<double> bump(centers[i], bandwidths[i]);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double x = bump(rng);
    if (x >= lower && x <= upper) return x;
  }
  return std::clamp(centers[i], lower, upper);
}

std::size_t DiscreteParzen::sample(Rng& rng) const {
  std::discrete_distribution<std::size_t> dist(probabilities.begin(), probabilities.end());
  return dist(rng);
}

double ParzenDensity::log_density(const SearchSpace& space, const Config& config) const {
  double lp = 0.0;
  for (std::size_t d = 0; d < dims.size(); ++d) {
    const auto& dim = space.dims()[d];
    double p = 0.0;
    if (const auto* c = std::get_if<ContinuousParzen>(&dims[d])) {
      p = c->pdf(std::get<double>(config.values[d]));
    } else {
      const auto& disc = std::get<DiscreteParzen>(dims[d]);
      if (const auto* i = std::get_if<IntegerDim>(&dim)) {
        p = disc.pmf(static_cast<std::size_t>(std::get<std::int64_t>(config.values[d]) - i->lower));
      } else {
        const auto& labels = std::get<CategoricalDim>(dim).labels;
        const auto& label = std::get<std::string>(config.values[d]);
        p = disc.pmf(static_cast<std::size_t>(std::find(labels.begin(), labels.end(), label) -
                                              labels.begin()));
      }
    }
    if (!(p > 0.0)) return kNegInf;
    lp += std::log(p);
  }
  return lp;
}

Config ParzenDensity::sample(const SearchSpace& space, Rng& rng) const {
  Config config;
  for (std::size_t d = 0; d < dims.size(); ++d) {
    const auto& dim = space.dims()[d];
    if (const auto* c = std::get_if<ContinuousParzen>(&dims[d])) {
      config.values.emplace_back(c->sample(rng));
    } else if (const auto* i = std::get_if<IntegerDim>(&dim)) {
      const std::size_t k = std::get<DiscreteParzen>(dims[d]).sample(rng);
      config.values.emplace_back(i->lower + static_cast<std::int64_t>(k));
    } else {
      const std::size_t k = std::get<DiscreteParzen>(dims[d]).sample(rng);
      config.values.emplace_back(std::get<CategoricalDim>(dim).labels[k]);
    }
  }
  return config;
}

ObservationSplit split_observations(const std::vector<Observation>& data, double gamma) {
  if (data.size() < 2) {
    throw Error(ErrorCode::InsufficientData, "splitting needs at least 2 observations");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0, 1)");
  std::vector<double> ys;
  ys.reserve(data.size());
  for (const auto& o : data) ys.push_back(o.y);
  std::sort(ys.begin(), ys.end());
  const auto n = static_cast<double>(ys.size());
  const std::size_t pos = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(gamma * n)), 1,
                                                  ys.size());
  ObservationSplit split;
  split.threshold = ys[pos - 1];
  for (const auto& o : data) {
    (o.y <= split.threshold ? split.lower : split.upper).push_back(o);
  }
  return split;
}

ParzenDensity fit_parzen(const std::vector<Config>& observations, const SearchSpace& space,
                         const TpeConfig& config) {
  config.validate();
  ParzenDensity density;
  for (std::size_t d = 0; d < space.num_dims(); ++d) {
    const auto& dim = space.dims()[d];
    if (const auto* r = std::get_if<RealDim>(&dim)) {
      ContinuousParzen c;
      c.lower = r->lower;
      c.upper = r->upper;
      c.prior_weight = config.prior_weight;
      for (const auto& obs : observations) c.centers.push_back(std::get<double>(obs.values[d]));
      std::sort(c.centers.begin(), c.centers.end());
      const double range = r->upper - r->lower;
      for (std::size_t i = 0; i < c.centers.size(); ++i) {
        const double left = i == 0 ? c.centers[i] - r->lower : c.centers[i] - c.centers[i - 1];
        const double right =
            i + 1 == c.centers.size() ? r->upper - c.centers[i] : c.centers[i + 1] - c.centers[i];
        c.bandwidths.push_back(std::clamp(std::max(left, right),
                                          config.min_bandwidth_fraction * range,
                                          config.max_bandwidth_fraction * range));
      }
      density.dims.emplace_back(std::move(c));
    } else if (const auto* i = std::get_if<IntegerDim>(&dim)) {
      std::vector<std::size_t> idx;
      for (const auto& obs : observations) {
        idx.push_back(static_cast<std::size_t>(std::get<std::int64_t>(obs.values[d]) - i->lower));
      }
      density.dims.emplace_back(
          smoothed_counts(idx, static_cast<std::size_t>(i->upper - i->lower + 1), config.prior_weight));
    } else {
      const auto& labels = std::get<CategoricalDim>(dim).labels;
      std::vector<std::size_t> idx;
      for (const auto& obs : observations) {
        const auto& label = std::get<std::string>(obs.values[d]);
        idx.push_back(static_cast<std::size_t>(std::find(labels.begin(), labels.end(), label) -
                                               labels.begin()));
      }
      density.dims.emplace_back(smoothed_counts(idx, labels.size(), config.prior_weight));
    }
  }
  return density;
}

std::size_t tpe_select(const std::vector<Config>& candidates, const ParzenDensity& good,
                       const ParzenDensity& bad, const SearchSpace& space) {
  if (candidates.empty()) throw Error(ErrorCode::InvalidArgument, "no TPE candidates");
  std::size_t best = 0;
  double best_score = kNegInf;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double lg = good.log_density(space, candidates[i]);
    const double lb = bad.log_density(space, candidates[i]);
    double score = lg - lb;
    if (lg == kNegInf) score = kNegInf;
    if (i == 0 || score > best_score) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

Config tpe_suggest(const std::vector<Observation>& data, const SearchSpace& space,
                   const TpeConfig& config, Rng& rng) {
  config.validate();
  if (data.size() < 2) return random_suggest(space, rng);
  const ObservationSplit split = split_observations(data, config.gamma);
  std::vector<Config> good_configs, bad_configs;
  for (const auto& o : split.lower) good_configs.push_back(o.config);
  for (const auto& o : split.upper) bad_configs.push_back(o.config);
  const ParzenDensity good = fit_parzen(good_configs, space, config);
  const ParzenDensity bad = fit_parzen(bad_configs, space, config);

  std::vector<Config> candidates;
  candidates.reserve(static_cast<std::size_t>(config.n_candidates));
  for (int i = 0; i < config.n_candidates; ++i) candidates.push_back(good.sample(space, rng));
  return candidates[tpe_select(candidates, good, bad, space)];
}

Config random_suggest(const SearchSpace& space, Rng& rng) {
  return space.decode(space.sample_uniform(rng));
}

}  // namespace mixedbo
