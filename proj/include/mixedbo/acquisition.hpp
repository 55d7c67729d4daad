#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mixedbo/gp_model.hpp"

namespace mixedbo {

double normal_pdf(double x);
double normal_cdf(double x);

/// Closed-form EI for minimization: std * (g * Phi(g) + phi(g)) with
/// g = (incumbent - mean) / std; zero when std is zero.
double expected_improvement(double mean, double std, double incumbent);

/// GP posteriors sharing one dataset, one per hyperparameter sample.
class AveragedPredictor {
 public:
  explicit AveragedPredictor(std::vector<GpPosterior> posteriors);

  double averaged_ei(std::span<const double> x, double incumbent) const;
  double averaged_mean(std::span<const double> x) const;

  const std::vector<GpPosterior>& posteriors() const { return posteriors_; }

 private:
  std::vector<GpPosterior> posteriors_;
};

struct OptBudget {
  int n_random = 1000;
  int n_starts = 10;
  double tol = 1e-4;  // final pattern step, as a fraction of each coordinate's range
};

/// Derivative-free maximization over the encoded box: uniform random
/// candidates, then coordinate pattern search from the best `n_starts`.
/// Ties keep the earliest candidate.
RelaxedPoint maximize_over_box(const std::function<double(std::span<const double>)>& score,
                               const SearchSpace& space, const OptBudget& budget, Rng& rng);

RelaxedPoint maximize_acquisition(const AveragedPredictor& pred, const SearchSpace& space,
                                  double incumbent, const OptBudget& budget, Rng& rng);

}  // namespace mixedbo
