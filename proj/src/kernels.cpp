#include "mixedbo/kernels.hpp"

#include <cmath>
#include <string>

#include "mixedbo/error.hpp"

namespace mixedbo {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

void check_width(std::size_t a, std::size_t b, std::size_t ls) {
  if (a != b || a != ls) {
    throw Error(ErrorCode::Dimension, "kernel inputs have widths " + std::to_string(a) + " and " +
                                          std::to_string(b) + " with " + std::to_string(ls) +
                                          " lengthscales");
  }
}

}  // namespace

void KernelParams::validate() const {
  if (lengthscales.empty()) throw Error(ErrorCode::InvalidArgument, "no lengthscales");
  for (double l : lengthscales) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw Error(ErrorCode::InvalidArgument, "lengthscales must be positive and finite");
    }
  }
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw Error(ErrorCode::InvalidArgument, "amplitude must be positive and finite");
  }
}

void KernelSpec::validate() const {
  params.validate();
  if (transform_inputs && !space) {
    throw Error(ErrorCode::InvalidArgument, "transformed kernel requires a search space");
  }
  if (space && space->encoded_width() != params.lengthscales.size()) {
    throw Error(ErrorCode::Dimension, "lengthscale count does not match the encoded width");
  }
}

double scaled_distance(std::span<const double> a, std::span<const double> b,
                       const KernelParams& params) {
  check_width(a.size(), b.size(), params.lengthscales.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = (a[j] - b[j]) / params.lengthscales[j];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double kernel_of_distance(double r, const KernelParams& params) {
  switch (params.family) {
    case KernelFamily::Matern32: {
      const double s = kSqrt3 * r;
      return params.amplitude * (1.0 + s) * std::exp(-s);
    }
    case KernelFamily::SquaredExponential:
      return params.amplitude * std::exp(-0.5 * r * r);
  }
  return 0.0;
}

double kernel_value_prepared(const double* a, const double* b, std::size_t width,
                             const KernelParams& params) {
  double sum = 0.0;
  const double* ls = params.lengthscales.data();
  for (std::size_t j = 0; j < width; ++j) {
    const double d = (a[j] - b[j]) / ls[j];
    sum += d * d;
  }
  if (params.family == KernelFamily::SquaredExponential) {
    return params.amplitude * std::exp(-0.5 * sum);
  }
  const double s = kSqrt3 * std::sqrt(sum);
  return params.amplitude * (1.0 + s) * std::exp(-s);
}

RelaxedPoint kernel_input(std::span<const double> p, const KernelSpec& spec) {
  if (spec.transform_inputs) return spec.space->transform(p);
  return RelaxedPoint(p.begin(), p.end());
}

double kernel_value(std::span<const double> a, std::span<const double> b, const KernelSpec& spec) {
  check_width(a.size(), b.size(), spec.params.lengthscales.size());
  if (!spec.transform_inputs) return kernel_of_distance(scaled_distance(a, b, spec.params), spec.params);
  const RelaxedPoint ta = spec.space->transform(a);
  const RelaxedPoint tb = spec.space->transform(b);
  return kernel_of_distance(scaled_distance(ta, tb, spec.params), spec.params);
}

double default_jitter(const KernelParams& params) { return 1e-8 * params.amplitude; }

Eigen::MatrixXd gram_matrix(const std::vector<RelaxedPoint>& points, const KernelSpec& spec,
                            double jitter) {
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "gram matrix of an empty point set");
  const std::size_t n = points.size();
  const std::size_t width = spec.params.lengthscales.size();
  std::vector<RelaxedPoint> inputs;
  inputs.reserve(n);
  for (const auto& p : points) {
    check_width(p.size(), width, width);
    inputs.push_back(kernel_input(p, spec));
  }
  Eigen::MatrixXd K(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    K(i, i) = spec.params.amplitude + jitter;
    for (std::size_t j = 0; j < i; ++j) {
      const double k = kernel_value_prepared(inputs[i].data(), inputs[j].data(), width, spec.params);
      K(i, j) = k;
      K(j, i) = k;
    }
  }
  return K;
}

}  // namespace mixedbo
