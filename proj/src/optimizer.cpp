#include "mixedbo/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "mixedbo/error.hpp"
#include "mixedbo/synthetic.hpp"

namespace mixedbo {

const char* to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Naive: return "naive";
    case StrategyKind::Basic: return "basic";
    case StrategyKind::Proposed: return "proposed";
    case StrategyKind::Tpe: return "tpe";
    case StrategyKind::Random: return "random";
  }
  return "unknown";
}

StrategyKind strategy_kind_from_string(const std::string& name) {
  if (name == "naive") return StrategyKind::Naive;
  if (name == "basic") return StrategyKind::Basic;
  if (name == "proposed") return StrategyKind::Proposed;
  if (name == "tpe") return StrategyKind::Tpe;
  if (name == "random") return StrategyKind::Random;
  throw Error(ErrorCode::InvalidArgument, "unknown strategy '" + name + "'");
}

bool is_gp(StrategyKind kind) {
  return kind == StrategyKind::Naive || kind == StrategyKind::Basic ||
         kind == StrategyKind::Proposed;
}

namespace {
Strategy gp_strategy(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Naive: return Strategy::Naive;
    case StrategyKind::Basic: return Strategy::Basic;
    default: return Strategy::Proposed;
  }
}
}  // namespace

Optimizer::Optimizer(std::shared_ptr<const SearchSpace> space, StrategyKind kind,
                     const OptimizerOptions& options, std::uint64_t seed)
    : space_(std::move(space)), kind_(kind), options_(options) {
  options_.tpe.validate();
  state_ = make_state(space_, gp_strategy(kind), options_.engine, mix_seed(seed, 1));
  Rng design_rng(mix_seed(seed, 0));
  design_ = initial_design(*space_, gp_strategy(kind), options_.engine.n_init, design_rng);
}

Suggestion Optimizer::ask() {
  if (history_.size() < design_.size()) return design_[history_.size()];
  switch (kind_) {
    case StrategyKind::Naive:
    case StrategyKind::Basic:
    case StrategyKind::Proposed:
      return suggest(state_);
    case StrategyKind::Tpe: {
      Config c = tpe_suggest(history_, *space_, options_.tpe, state_.rng);
      RelaxedPoint p = space_->encode(c);
      return Suggestion{p, std::move(c), p};
    }
    case StrategyKind::Random: {
      RelaxedPoint p = space_->sample_uniform(state_.rng);
      return make_suggestion(*space_, Strategy::Naive, std::move(p));
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown strategy");
}

void Optimizer::tell(const Suggestion& sugg, double y) {
  if (!std::isfinite(y)) throw Error(ErrorCode::InvalidObservation, "observation is not finite");
  space_->validate(sugg.eval_config);
  state_ = mixedbo::tell(std::move(state_), sugg, y);
  history_.push_back({sugg.eval_config, y});
}

void Optimizer::observe(const Config& config, double y) {
  RelaxedPoint p = space_->encode(config);
  tell(Suggestion{p, config, p}, y);
}

Config Optimizer::recommend(RecommendMode mode) {
  if (history_.empty()) throw Error(ErrorCode::InsufficientData, "no observations yet");
  if (is_gp(kind_) && mode == RecommendMode::PosteriorMeanMin) {
    return mixedbo::recommend(state_, mode);
  }
  const auto best = std::min_element(history_.begin(), history_.end(),
                                     [](const Observation& a, const Observation& b) { return a.y < b.y; });
  return best->config;
}

}  // namespace mixedbo
