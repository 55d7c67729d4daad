#include "mixedbo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mixedbo/error.hpp"

namespace mixedbo {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr double kInvSqrt2 = 0.7071067811865476;
constexpr int kMaxPatternEvals = 20000;
}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double expected_improvement(double mean, double std, double incumbent) {
  if (!(std > 0.0)) return 0.0;
  const double g = (incumbent - mean) / std;
  return std::max(0.0, std * (g * normal_cdf(g) + normal_pdf(g)));
}

AveragedPredictor::AveragedPredictor(std::vector<GpPosterior> posteriors)
    : posteriors_(std::move(posteriors)) {
  if (posteriors_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "averaged predictor needs at least one posterior");
  }
}

double AveragedPredictor::averaged_ei(std::span<const double> x, double incumbent) const {
  double sum = 0.0;
  for (const auto& post : posteriors_) {
    const Prediction p = post.predict(x);
    sum += expected_improvement(p.mean, std::sqrt(p.variance), incumbent);
  }
  return sum / static_cast<double>(posteriors_.size());
}

double AveragedPredictor::averaged_mean(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& post : posteriors_) sum += post.predict_mean(x);
  return sum / static_cast<double>(posteriors_.size());
}

RelaxedPoint maximize_over_box(const std::function<double(std::span<const double>)>& score,
                               const SearchSpace& space, const OptBudget& budget, Rng& rng) {
  if (budget.n_random < 1 || budget.n_starts < 0 || !(budget.tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "acquisition budget needs n_random >= 1, n_starts >= 0, tol > 0");
  }
  const auto& lo = space.lower_bounds();
  const auto& hi = space.upper_bounds();
  const std::size_t width = space.encoded_width();

  std::vector<RelaxedPoint> candidates;
  std::vector<double> values;
  candidates.reserve(static_cast<std::size_t>(budget.n_random));
  for (int i = 0; i < budget.n_random; ++i) {
    candidates.push_back(space.sample_uniform(rng));
    values.push_back(score(candidates.back()));
  }

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  RelaxedPoint best = candidates[order[0]];
  double best_value = values[order[0]];

  const std::size_t n_starts = std::min(order.size(), static_cast<std::size_t>(budget.n_starts));
  for (std::size_t s = 0; s < n_starts; ++s) {
    RelaxedPoint x = candidates[order[s]];
    double fx = values[order[s]];
    std::vector<double> step(width);
    for (std::size_t k = 0; k < width; ++k) step[k] = 0.25 * (hi[k] - lo[k]);
    double scale = 1.0;
    int evals = 0;
    while (scale * 0.25 >= budget.tol && evals < kMaxPatternEvals) {
      bool improved = false;
      for (std::size_t k = 0; k < width; ++k) {
        for (double dir : {1.0, -1.0}) {
          const double original = x[k];
          const double moved = std::clamp(original + dir * scale * step[k], lo[k], hi[k]);
          if (moved == original) continue;
          x[k] = moved;
          const double fm = score(x);
          ++evals;
          if (fm > fx) {
            fx = fm;
            improved = true;
            break;
          }
          x[k] = original;
        }
      }
      if (!improved) scale *= 0.5;
    }
    if (fx > best_value) {
      best_value = fx;
      best = x;
    }
  }
  return best;
}

RelaxedPoint maximize_acquisition(const AveragedPredictor& pred, const SearchSpace& space,
                                  double incumbent, const OptBudget& budget, Rng& rng) {
  return maximize_over_box(
      [&](std::span<const double> x) { return pred.averaged_ei(x, incumbent); }, space, budget, rng);
}

}  // namespace mixedbo
