#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mixedbo/search_space.hpp"

namespace mixedbo {

enum class KernelFamily { Matern32, SquaredExponential };

struct KernelParams {
  std::vector<double> lengthscales;  // one per encoded coordinate
  double amplitude = 1.0;
  KernelFamily family = KernelFamily::Matern32;

  void validate() const;
};

/// Covariance function plus the switch that turns it into k'(a, b) = k(T(a), T(b)).
struct KernelSpec {
  KernelParams params;
  bool transform_inputs = false;
  std::shared_ptr<const SearchSpace> space;

  void validate() const;
};

/// ARD distance sqrt(sum_j ((a_j - b_j) / l_j)^2).
double scaled_distance(std::span<const double> a, std::span<const double> b,
                       const KernelParams& params);

/// Stationary profile as a function of the ARD distance.
double kernel_of_distance(double r, const KernelParams& params);

double kernel_value(std::span<const double> a, std::span<const double> b, const KernelSpec& spec);

/// Same as kernel_value for inputs already passed through T (or when T is off).
/// No dimension checks; used on the hot prediction path.
double kernel_value_prepared(const double* a, const double* b, std::size_t width,
                             const KernelParams& params);

/// Maps a point into the space the covariance actually sees.
RelaxedPoint kernel_input(std::span<const double> p, const KernelSpec& spec);

/// 10^-8 * amplitude.
double default_jitter(const KernelParams& params);

Eigen::MatrixXd gram_matrix(const std::vector<RelaxedPoint>& points, const KernelSpec& spec,
                            double jitter);

}  // namespace mixedbo
