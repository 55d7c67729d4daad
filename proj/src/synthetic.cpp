#include "mixedbo/synthetic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "mixedbo/error.hpp"

namespace mixedbo {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Layout layout_from_string(const std::string& name) {
  if (name == "2d-int") return Layout::TwoDInteger;
  if (name == "2d-cat") return Layout::TwoDCategorical;
  if (name == "4d-int") return Layout::FourDInteger;
  if (name == "4d-cat") return Layout::FourDCategorical;
  throw Error(ErrorCode::InvalidArgument, "unknown layout '" + name + "'");
}

const char* to_string(Layout layout) {
  switch (layout) {
    case Layout::TwoDInteger: return "2d-int";
    case Layout::TwoDCategorical: return "2d-cat";
    case Layout::FourDInteger: return "4d-int";
    case Layout::FourDCategorical: return "4d-cat";
  }
  return "unknown";
}

SearchSpace make_experiment_space(Layout layout) {
  const RealDim unit{0.0, 1.0};
  switch (layout) {
    case Layout::TwoDInteger:
      return SearchSpace({unit, IntegerDim{0, 4}});
    case Layout::TwoDCategorical:
      return SearchSpace({unit, CategoricalDim{{"c0", "c1", "c2", "c3", "c4"}}});
    case Layout::FourDInteger:
      return SearchSpace({unit, unit, IntegerDim{0, 4}, IntegerDim{0, 4}});
    case Layout::FourDCategorical:
      return SearchSpace(
          {unit, unit, CategoricalDim{{"c0", "c1", "c2"}}, CategoricalDim{{"c0", "c1", "c2"}}});
  }
  throw Error(ErrorCode::InvalidArgument, "unknown layout");
}

int default_grid_density(const SearchSpace& space) {
  const std::size_t n_real = space.num_real_dims();
  if (n_real <= 1) return 200;
  const double per_real = 2500.0 / static_cast<double>(space.num_discrete_combinations());
  const int d = static_cast<int>(std::floor(std::pow(per_real, 1.0 / static_cast<double>(n_real)) + 1e-9));
  return std::max(2, d);
}

int default_grid_density(Layout layout) { return default_grid_density(make_experiment_space(layout)); }

std::size_t GpSampleObjective::KeyHash::operator()(const std::vector<double>& key) const noexcept {
  std::uint64_t h = 0x51ed270b27e4f3a1ULL;
  for (double x : key) h = mix_seed(h, std::bit_cast<std::uint64_t>(x));
  return static_cast<std::size_t>(h);
}

GpSampleObjective::GpSampleObjective(std::shared_ptr<const SearchSpace> space, KernelParams truth,
                                     std::uint64_t seed, std::size_t grid_cap)
    : space_(std::move(space)), seed_(seed), grid_cap_(grid_cap) {
  if (!space_) throw Error(ErrorCode::InvalidArgument, "objective needs a search space");
  spec_.params = std::move(truth);
  spec_.transform_inputs = true;
  spec_.space = space_;
  spec_.validate();
  jitter_ = default_jitter(spec_.params);
}

GpSampleObjective GpSampleObjective::with_default_truth(std::shared_ptr<const SearchSpace> space,
                                                        std::uint64_t seed) {
  KernelParams truth;
  truth.lengthscales.assign(space->encoded_width(), 0.3);
  truth.amplitude = 1.0;
  truth.family = KernelFamily::Matern32;
  return GpSampleObjective(std::move(space), std::move(truth), seed);
}

double GpSampleObjective::draw_standard_normal(const std::vector<double>& key) const {
  std::uint64_t s = mix_seed(seed_, 0x6f626a6563746976ULL);
  for (double x : key) s = mix_seed(s, std::bit_cast<std::uint64_t>(x));
  Rng rng(s);
  std::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

double GpSampleObjective::latent(const Config& config) {
  std::vector<double> key = space_->transform(space_->encode(config));
  for (double& x : key) x += 0.0;  // -0.0 and 0.0 share a key
  if (const auto it = index_.find(key); it != index_.end()) return values_[it->second];

  const std::size_t n = points_.size();
  const std::size_t width = key.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = kernel_value_prepared(key.data(), points_[i].data(), width, spec_.params);
  }
  // Forward substitution against the packed factor.
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = chol_rows_[i];
    double s = v[i];
    for (std::size_t j = 0; j < i; ++j) s -= row[j] * v[j];
    v[i] = s / row[i];
  }
  double mean = 0.0;
  double explained = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean += v[i] * whitened_[i];
    explained += v[i] * v[i];
  }
  const double cond_var = spec_.params.amplitude + jitter_ - explained;
  const double sd = std::sqrt(std::max(cond_var, 0.5 * jitter_));
  const double z = draw_standard_normal(key);
  const double f = mean + sd * z;

  v.push_back(sd);
  chol_rows_.push_back(std::move(v));
  whitened_.push_back(z);
  values_.push_back(f);
  index_.emplace(key, n);
  points_.push_back(std::move(key));
  return f;
}

double GpSampleObjective::query(const Config& config, const NoiseModel& noise, Rng& rng) {
  if (!(noise.variance >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise variance must be >= 0");
  const double f = latent(config);
  if (noise.variance == 0.0) return f;
  std::normal_distribution<double> eps(0.0, std::sqrt(noise.variance));
  return f + eps(rng);
}

std::vector<Config> GpSampleObjective::grid(int grid_density) const {
  if (grid_density < 2 && space_->num_real_dims() > 0) {
    throw Error(ErrorCode::InvalidArgument, "grid density must be >= 2");
  }
  std::vector<std::vector<Value>> axes;
  double total = 1.0;
  for (const auto& dim : space_->dims()) {
    std::vector<Value> axis;
    if (const auto* r = std::get_if<RealDim>(&dim)) {
      for (int i = 0; i < grid_density; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(grid_density - 1);
        axis.emplace_back(i == grid_density - 1 ? r->upper : r->lower + t * (r->upper - r->lower));
      }
    } else if (const auto* in = std::get_if<IntegerDim>(&dim)) {
      for (std::int64_t v = in->lower; v <= in->upper; ++v) axis.emplace_back(v);
    } else {
      for (const auto& label : std::get<CategoricalDim>(dim).labels) axis.emplace_back(label);
    }
    total *= static_cast<double>(axis.size());
    axes.push_back(std::move(axis));
  }
  if (total > static_cast<double>(grid_cap_)) {
    throw Error(ErrorCode::GridTooLarge, "grid of " + std::to_string(static_cast<long long>(total)) +
                                             " configurations exceeds the cap of " +
                                             std::to_string(grid_cap_));
  }
  std::vector<Config> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    Config c;
    for (std::size_t d = 0; d < axes.size(); ++d) c.values.push_back(axes[d][idx[d]]);
    out.push_back(std::move(c));
    std::size_t d = axes.size();
    while (d > 0) {
      --d;
      if (++idx[d] < axes[d].size()) break;
      idx[d] = 0;
      if (d == 0) return out;
    }
  }
}

GridMinimum GpSampleObjective::true_minimum(int grid_density) {
  GridMinimum best;
  bool first = true;
  for (Config& c : grid(grid_density)) {
    const double f = latent(c);
    if (first || f < best.value) {
      best.value = f;
      best.config = std::move(c);
      first = false;
    }
  }
  return best;
}

}  // namespace mixedbo
