#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mixedbo/baselines.hpp"
#include "mixedbo/bo_engine.hpp"

namespace mixedbo {

enum class StrategyKind { Naive, Basic, Proposed, Tpe, Random };

const char* to_string(StrategyKind kind);
StrategyKind strategy_kind_from_string(const std::string& name);
bool is_gp(StrategyKind kind);

struct OptimizerOptions {
  EngineConfig engine;  // n_init is shared by every strategy
  TpeConfig tpe;
};

/// Ask/tell front end shared by the GP strategies and the baselines. The
/// first n_init asks return the uniform initial design, which is identical
/// for every strategy built from the same seed.
class Optimizer {
 public:
  Optimizer(std::shared_ptr<const SearchSpace> space, StrategyKind kind,
            const OptimizerOptions& options, std::uint64_t seed);

  Suggestion ask();
  void tell(const Suggestion& sugg, double y);
  /// Records an evaluation made elsewhere; the stored input is encode(config).
  void observe(const Config& config, double y);

  /// GP strategies honour `mode`; TPE and random search always return the
  /// best observed configuration.
  Config recommend(RecommendMode mode);

  StrategyKind kind() const { return kind_; }
  std::size_t num_observations() const { return history_.size(); }
  const std::vector<Observation>& history() const { return history_; }
  const BoState& state() const { return state_; }
  const SearchSpace& space() const { return *space_; }

 private:
  std::shared_ptr<const SearchSpace> space_;
  StrategyKind kind_;
  OptimizerOptions options_;
  BoState state_;  // GP strategies; also owns the rng used by the baselines
  std::vector<Suggestion> design_;
  std::vector<Observation> history_;
};

}  // namespace mixedbo
