#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mixedbo/kernels.hpp"

namespace mixedbo {

struct Dataset {
  std::vector<RelaxedPoint> inputs;
  std::vector<double> targets;

  std::size_t size() const { return targets.size(); }
  bool empty() const { return targets.empty(); }
  void add(RelaxedPoint x, double y);
  void validate(std::size_t width) const;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;            // clamped at zero
  double variance_unclamped = 0.0;  // before clamping; may be a tiny negative
};

/// Exact GP regression with a zero prior mean. Immutable once fitted.
class GpPosterior {
 public:
  /// Factorizes K + (noise + jitter) I. The jitter starts at 1e-8 * amplitude
  /// and grows tenfold up to 1e-4 * amplitude before giving up with a
  /// singular-model error.
  static GpPosterior fit(const Dataset& data, const KernelSpec& spec, double noise);

  Prediction predict(std::span<const double> x) const;
  double predict_mean(std::span<const double> x) const;

  const KernelSpec& spec() const { return spec_; }
  double noise() const { return noise_; }
  double jitter() const { return jitter_; }
  std::size_t size() const { return targets_.size(); }
  const Eigen::MatrixXd& chol() const { return chol_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  double log_marginal_likelihood() const;

 private:
  GpPosterior() = default;

  void cross_covariance(std::span<const double> x, Eigen::VectorXd& kstar) const;

  KernelSpec spec_;
  double noise_ = 0.0;
  double jitter_ = 0.0;
  std::size_t width_ = 0;
  Eigen::MatrixXd inputs_;  // kernel-space inputs, one per column
  Eigen::VectorXd targets_;
  Eigen::MatrixXd chol_;    // lower factor
  Eigen::VectorXd alpha_;
};

/// -1/2 y^T alpha - sum log diag(L) - N/2 log(2 pi). An empty dataset has
/// log-likelihood 0.
double log_marginal_likelihood(const Dataset& data, const KernelSpec& spec, double noise);

}  // namespace mixedbo
