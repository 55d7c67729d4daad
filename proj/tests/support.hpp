#pragma once

#include <memory>
#include <random>

#include <Eigen/Dense>

#include "mixedbo/gp_model.hpp"
#include "mixedbo/kernels.hpp"
#include "mixedbo/search_space.hpp"

namespace testing {

using namespace mixedbo;

// Random mixed space with 1-4 dimensions of every kind.
inline std::shared_ptr<const SearchSpace> random_space(Rng& rng) {
  std::uniform_int_distribution<int> n_dims(1, 4), kind(0, 2), n_labels(2, 5), ilo(-3, 3), iw(0, 6);
  std::uniform_real_distribution<double> rlo(-5.0, 5.0), rw(0.1, 10.0);
  std::vector<Dimension> dims;
  const int n = n_dims(rng);
  for (int d = 0; d < n; ++d) {
    switch (kind(rng)) {
      case 0: {
        const double lo = rlo(rng);
        dims.push_back(RealDim{lo, lo + rw(rng)});
        break;
      }
      case 1: {
        const int lo = ilo(rng);
        dims.push_back(IntegerDim{lo, lo + iw(rng)});
        break;
      }
      default: {
        CategoricalDim c;
        const int k = n_labels(rng);
        for (int i = 0; i < k; ++i) c.labels.push_back("l" + std::to_string(i));
        dims.push_back(c);
      }
    }
  }
  return std::make_shared<const SearchSpace>(std::move(dims));
}

inline KernelParams random_params(std::size_t width, KernelFamily family, Rng& rng) {
  std::uniform_real_distribution<double> ls(0.2, 3.0), amp(0.3, 3.0);
  KernelParams p;
  p.family = family;
  p.amplitude = amp(rng);
  for (std::size_t j = 0; j < width; ++j) p.lengthscales.push_back(ls(rng));
  return p;
}

inline KernelSpec make_spec(std::shared_ptr<const SearchSpace> space, KernelParams params,
                            bool transform) {
  KernelSpec s;
  s.params = std::move(params);
  s.transform_inputs = transform;
  s.space = std::move(space);
  return s;
}

// Kernel written directly from its closed form, without the library's helpers.
inline double oracle_kernel(const std::vector<double>& a, const std::vector<double>& b,
                            const KernelSpec& spec) {
  std::vector<double> x = a, y = b;
  if (spec.transform_inputs) {
    x = spec.space->transform(x);
    y = spec.space->transform(y);
  }
  long double r2 = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const long double d = (x[j] - y[j]) / spec.params.lengthscales[j];
    r2 += d * d;
  }
  const long double r = std::sqrt(r2);
  const long double s2 = spec.params.amplitude;
  if (spec.params.family == KernelFamily::Matern32) {
    return static_cast<double>(s2 * (1 + std::sqrt(3.0L) * r) * std::exp(-std::sqrt(3.0L) * r));
  }
  return static_cast<double>(s2 * std::exp(-r2 / 2));
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace testing
