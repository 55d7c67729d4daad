#include "mixedbo/gp_model.hpp"

#include <cmath>
#include <sstream>

#include "mixedbo/error.hpp"

namespace mixedbo {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

double condition_estimate(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

}  // namespace

void Dataset::add(RelaxedPoint x, double y) {
  inputs.push_back(std::move(x));
  targets.push_back(y);
}

void Dataset::validate(std::size_t width) const {
  if (inputs.size() != targets.size()) {
    throw Error(ErrorCode::InvalidArgument, "dataset inputs and targets differ in length");
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].size() != width) {
      throw Error(ErrorCode::Dimension, "dataset input " + std::to_string(i) + " has width " +
                                            std::to_string(inputs[i].size()) + ", expected " +
                                            std::to_string(width));
    }
    if (!std::isfinite(targets[i])) {
      throw Error(ErrorCode::InvalidObservation, "dataset target " + std::to_string(i) + " is not finite");
    }
  }
}

GpPosterior GpPosterior::fit(const Dataset& data, const KernelSpec& spec, double noise) {
  spec.validate();
  if (!(noise >= 0.0) || !std::isfinite(noise)) {
    throw Error(ErrorCode::InvalidArgument, "noise variance must be a finite value >= 0");
  }
  GpPosterior post;
  post.spec_ = spec;
  post.noise_ = noise;
  post.width_ = spec.params.lengthscales.size();
  data.validate(post.width_);

  const std::size_t n = data.size();
  post.inputs_.resize(static_cast<Eigen::Index>(post.width_), static_cast<Eigen::Index>(n));
  post.targets_.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const RelaxedPoint xi = kernel_input(data.inputs[i], spec);
    for (std::size_t j = 0; j < post.width_; ++j) post.inputs_(j, i) = xi[j];
    post.targets_(i) = data.targets[i];
  }
  post.jitter_ = default_jitter(spec.params);
  if (n == 0) return post;

  Eigen::MatrixXd K(n, n);
  const auto& params = spec.params;
  for (std::size_t i = 0; i < n; ++i) {
    K(i, i) = params.amplitude + noise;
    for (std::size_t j = 0; j < i; ++j) {
      const double k = kernel_value_prepared(post.inputs_.col(i).data(), post.inputs_.col(j).data(),
                                             post.width_, params);
      K(i, j) = k;
      K(j, i) = k;
    }
  }

  const double max_jitter = 1e-4 * params.amplitude * (1.0 + 1e-9);
  for (double jitter = post.jitter_; jitter <= max_jitter; jitter *= 10.0) {
    Eigen::MatrixXd A = K;
    A.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() == Eigen::Success) {
      post.jitter_ = jitter;
      post.chol_ = llt.matrixL();
      post.alpha_ = llt.solve(post.targets_);
      return post;
    }
  }
  Eigen::MatrixXd A = K;
  A.diagonal().array() += 1e-4 * params.amplitude;
  std::ostringstream msg;
  msg << "Cholesky factorization failed for " << n << " points after jitter escalation"
      << " (condition estimate " << condition_estimate(A) << ")";
  throw Error(ErrorCode::SingularModel, msg.str());
}

void GpPosterior::cross_covariance(std::span<const double> x, Eigen::VectorXd& kstar) const {
  if (x.size() != width_) {
    throw Error(ErrorCode::Dimension, "prediction point has width " + std::to_string(x.size()) +
                                          ", expected " + std::to_string(width_));
  }
  const std::size_t n = size();
  kstar.resize(static_cast<Eigen::Index>(n));
  if (spec_.transform_inputs) {
    const RelaxedPoint tx = spec_.space->transform(x);
    for (std::size_t i = 0; i < n; ++i) {
      kstar(i) = kernel_value_prepared(tx.data(), inputs_.col(i).data(), width_, spec_.params);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      kstar(i) = kernel_value_prepared(x.data(), inputs_.col(i).data(), width_, spec_.params);
    }
  }
}

Prediction GpPosterior::predict(std::span<const double> x) const {
  Prediction out;
  const double prior = spec_.params.amplitude;
  if (size() == 0) {
    if (x.size() != width_) throw Error(ErrorCode::Dimension, "prediction point has the wrong width");
    out.variance = out.variance_unclamped = prior;
    return out;
  }
  Eigen::VectorXd kstar;
  cross_covariance(x, kstar);
  out.mean = kstar.dot(alpha_);
  chol_.triangularView<Eigen::Lower>().solveInPlace(kstar);
  out.variance_unclamped = prior - kstar.squaredNorm();
  out.variance = std::max(0.0, out.variance_unclamped);
  return out;
}

double GpPosterior::predict_mean(std::span<const double> x) const {
  if (size() == 0) return 0.0;
  Eigen::VectorXd kstar;
  cross_covariance(x, kstar);
  return kstar.dot(alpha_);
}

double GpPosterior::log_marginal_likelihood() const {
  const auto n = static_cast<double>(size());
  if (size() == 0) return 0.0;
  return -0.5 * targets_.dot(alpha_) - chol_.diagonal().array().log().sum() - 0.5 * n * kLog2Pi;
}

double log_marginal_likelihood(const Dataset& data, const KernelSpec& spec, double noise) {
  return GpPosterior::fit(data, spec, noise).log_marginal_likelihood();
}

}  // namespace mixedbo
