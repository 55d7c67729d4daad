#include <doctest.h>

#include "mixedbo/bo_engine.hpp"
#include "mixedbo/error.hpp"
#include "mixedbo/optimizer.hpp"
#include "support.hpp"

using namespace mixedbo;

namespace {

std::shared_ptr<const SearchSpace> mixed_space() {
  return std::make_shared<const SearchSpace>(
      std::vector<Dimension>{RealDim{0, 1}, IntegerDim{0, 4}, CategoricalDim{{"a", "b", "c"}}});
}

EngineConfig fast_config() {
  EngineConfig c;
  c.sampler.burn_in = 5;
  c.sampler.n_samples = 3;
  c.budget = OptBudget{200, 3, 1e-3};
  return c;
}

double toy(const Config& c) {
  const double x = std::get<double>(c.values[0]);
  const double k = static_cast<double>(std::get<std::int64_t>(c.values[1]));
  const double bonus = std::get<std::string>(c.values[2]) == "b" ? -1.0 : 0.0;
  return (x - 0.3) * (x - 0.3) + 0.1 * (k - 2) * (k - 2) + bonus;
}

}  // namespace

TEST_CASE("strategy names") {
  for (auto s : {Strategy::Naive, Strategy::Basic, Strategy::Proposed}) {
    CHECK(strategy_from_string(to_string(s)) == s);
  }
  CHECK_THROWS_AS(strategy_from_string("tpe"), Error);
  for (auto k : {StrategyKind::Naive, StrategyKind::Basic, StrategyKind::Proposed, StrategyKind::Tpe,
                 StrategyKind::Random}) {
    CHECK(strategy_kind_from_string(to_string(k)) == k);
  }
  CHECK(is_gp(StrategyKind::Proposed));
  CHECK_FALSE(is_gp(StrategyKind::Tpe));
  CHECK_THROWS_AS(strategy_kind_from_string("smac"), Error);
}

TEST_CASE("suggestion fields per strategy") {
  const auto space = mixed_space();
  const RelaxedPoint x{0.4, 2.7, 0.2, 0.9, 0.1};
  const Config expected{{0.4, std::int64_t{3}, std::string("b")}};
  const auto naive = make_suggestion(*space, Strategy::Naive, x);
  CHECK(naive.eval_config == expected);
  CHECK(naive.acq_argmax == x);
  CHECK(naive.stored_input == RelaxedPoint{0.4, 3, 0, 1, 0});
  for (auto s : {Strategy::Basic, Strategy::Proposed}) {
    const auto sug = make_suggestion(*space, s, x);
    CHECK(sug.eval_config == expected);
    CHECK(sug.stored_input == x);
  }
}

TEST_CASE("only the proposed strategy transforms kernel inputs") {
  const auto space = mixed_space();
  for (auto s : {Strategy::Naive, Strategy::Basic, Strategy::Proposed}) {
    const auto state = make_state(space, s, EngineConfig{}, 1);
    CHECK(strategy_kernel(state).transform_inputs == (s == Strategy::Proposed));
    CHECK(strategy_kernel(state).params.lengthscales.size() == space->encoded_width());
  }
}

TEST_CASE("initialize evaluates the design and tell appends") {
  const auto space = mixed_space();
  auto state = initialize(space, Strategy::Proposed, 4, toy, fast_config(), 3);
  CHECK(state.dataset.size() == 4);
  CHECK(state.iteration == 0);
  const double inc = state.incumbent();
  const auto s = suggest(state);
  CHECK(space->contains(s.acq_argmax));
  const auto next = tell(state, s, toy(s.eval_config));
  CHECK(next.dataset.size() == 5);
  CHECK(next.iteration == 1);
  CHECK(next.incumbent() <= inc);
  CHECK(state.dataset.size() == 4);
}

TEST_CASE("tell is a pure function of its inputs") {
  const auto space = mixed_space();
  auto state = initialize(space, Strategy::Basic, 3, toy, fast_config(), 3);
  const auto s = make_suggestion(*space, Strategy::Basic, RelaxedPoint{0.5, 1.2, 0.3, 0.3, 0.4});
  const auto a = tell(state, s, 0.25);
  const auto b = tell(state, s, 0.25);
  CHECK(a.dataset.inputs == b.dataset.inputs);
  CHECK(a.dataset.targets == b.dataset.targets);
  CHECK(a.rng == b.rng);
}

TEST_CASE("tell rejects bad observations") {
  const auto space = mixed_space();
  auto state = make_state(space, Strategy::Naive, EngineConfig{}, 1);
  const auto s = make_suggestion(*space, Strategy::Naive, RelaxedPoint{0.5, 1, 1, 0, 0});
  for (double y : {std::nan(""), std::numeric_limits<double>::infinity()}) {
    try {
      tell(state, s, y);
      FAIL("expected InvalidObservation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidObservation);
    }
  }
  Suggestion outside = s;
  outside.stored_input = {2.0, 1, 1, 0, 0};
  CHECK_THROWS_AS(tell(state, outside, 1.0), Error);
  CHECK_THROWS_AS(state.incumbent(), Error);
  CHECK_THROWS_AS(suggest(state), Error);
}

TEST_CASE("objective failures are reported with the config") {
  const auto space = mixed_space();
  const Objective broken = [](const Config&) -> double { throw std::runtime_error("boom"); };
  try {
    initialize(space, Strategy::Proposed, 2, broken, fast_config(), 1);
    FAIL("expected an objective error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Objective);
    CHECK(std::string(e.what()).find("boom") != std::string::npos);
  }
}

TEST_CASE("suggest is deterministic for a fixed seed") {
  const auto space = mixed_space();
  auto a = initialize(space, Strategy::Proposed, 3, toy, fast_config(), 9);
  auto b = initialize(space, Strategy::Proposed, 3, toy, fast_config(), 9);
  CHECK(suggest(a).acq_argmax == suggest(b).acq_argmax);
  CHECK(a.chain == b.chain);
  CHECK(a.last_samples.size() == 3);
}

TEST_CASE("noiseless engines keep the noise floor") {
  const auto space = mixed_space();
  auto cfg = fast_config();
  cfg.noiseless = true;
  auto state = initialize(space, Strategy::Proposed, 3, toy, cfg, 2);
  suggest(state);
  for (const auto& s : state.last_samples) CHECK(s.noise == 1e-6);
}

TEST_CASE("recommendations") {
  const auto space = mixed_space();
  auto state = initialize(space, Strategy::Proposed, 5, toy, fast_config(), 4);
  const auto best = recommend(state, RecommendMode::BestObserved);
  CHECK(toy(best) == doctest::Approx(state.incumbent()));
  const auto rec = recommend(state, RecommendMode::PosteriorMeanMin);
  CHECK_NOTHROW(space->validate(rec));
}

TEST_CASE("optimizer shares the initial design across strategies") {
  const auto space = mixed_space();
  OptimizerOptions opts;
  opts.engine = fast_config();
  std::vector<std::vector<Config>> designs;
  for (auto k : {StrategyKind::Naive, StrategyKind::Basic, StrategyKind::Proposed, StrategyKind::Tpe,
                 StrategyKind::Random}) {
    Optimizer opt(space, k, opts, 77);
    std::vector<Config> d;
    for (int i = 0; i < 3; ++i) {
      const auto s = opt.ask();
      d.push_back(s.eval_config);
      opt.tell(s, toy(s.eval_config));
    }
    designs.push_back(d);
    const auto s = opt.ask();
    CHECK_NOTHROW(space->validate(s.eval_config));
    CHECK(space->contains(s.stored_input));
  }
  for (const auto& d : designs) CHECK(d == designs[0]);
}

TEST_CASE("optimizer observe and recommend") {
  const auto space = mixed_space();
  OptimizerOptions opts;
  opts.engine = fast_config();
  Optimizer opt(space, StrategyKind::Tpe, opts, 1);
  CHECK_THROWS_AS(opt.recommend(RecommendMode::BestObserved), Error);
  const Config good{{0.3, std::int64_t{2}, std::string("b")}};
  opt.observe(good, toy(good));
  opt.observe(Config{{0.9, std::int64_t{0}, std::string("a")}}, 5.0);
  CHECK(opt.num_observations() == 2);
  CHECK(opt.recommend(RecommendMode::PosteriorMeanMin) == good);
  CHECK_THROWS_AS(opt.observe(Config{{2.0, std::int64_t{0}, std::string("a")}}, 1.0), Error);
  CHECK_THROWS_AS(opt.observe(good, std::nan("")), Error);
}
