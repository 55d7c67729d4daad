#include <doctest.h>

#include <algorithm>

#include "mixedbo/error.hpp"
#include "mixedbo/synthetic.hpp"
#include "support.hpp"

using namespace mixedbo;

TEST_CASE("layouts") {
  for (const char* name : {"2d-int", "2d-cat", "4d-int", "4d-cat"}) {
    CHECK(std::string(to_string(layout_from_string(name))) == name);
  }
  CHECK_THROWS_AS(layout_from_string("3d-int"), Error);
  CHECK(make_experiment_space(Layout::TwoDInteger).encoded_width() == 2);
  CHECK(make_experiment_space(Layout::TwoDCategorical).encoded_width() == 6);
  CHECK(make_experiment_space(Layout::FourDInteger).encoded_width() == 4);
  CHECK(make_experiment_space(Layout::FourDCategorical).encoded_width() == 8);
  CHECK(default_grid_density(Layout::TwoDInteger) == 200);
  CHECK(default_grid_density(Layout::TwoDCategorical) == 200);
  CHECK(default_grid_density(Layout::FourDInteger) == 10);
  CHECK(default_grid_density(Layout::FourDCategorical) == 16);
}

TEST_CASE("grid enumeration order and endpoints") {
  const auto space = std::make_shared<const SearchSpace>(
      std::vector<Dimension>{RealDim{-1, 1}, IntegerDim{0, 1}, CategoricalDim{{"a", "b"}}});
  const auto obj = GpSampleObjective::with_default_truth(space, 1);
  const auto g = obj.grid(3);
  REQUIRE(g.size() == 12);
  CHECK(g[0] == Config{{-1.0, std::int64_t{0}, std::string("a")}});
  CHECK(g[1] == Config{{-1.0, std::int64_t{0}, std::string("b")}});
  CHECK(g[2] == Config{{-1.0, std::int64_t{1}, std::string("a")}});
  CHECK(g[4] == Config{{0.0, std::int64_t{0}, std::string("a")}});
  CHECK(g[11] == Config{{1.0, std::int64_t{1}, std::string("b")}});
  CHECK_THROWS_AS(obj.grid(1), Error);
}

TEST_CASE("grid cap") {
  const auto space = std::make_shared<const SearchSpace>(std::vector<Dimension>{RealDim{0, 1}, RealDim{0, 1}});
  GpSampleObjective obj(space, KernelParams{{0.3, 0.3}, 1.0, KernelFamily::Matern32}, 1, 100);
  CHECK(obj.grid(10).size() == 100);
  try {
    obj.true_minimum(11);
    FAIL("expected GridTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridTooLarge);
  }
}

TEST_CASE("draws have the prior covariance") {
  const auto space = std::make_shared<const SearchSpace>(std::vector<Dimension>{RealDim{0, 1}, IntegerDim{0, 2}});
  const std::vector<Config> pts{Config{{0.1, std::int64_t{0}}}, Config{{0.3, std::int64_t{0}}},
                                Config{{0.1, std::int64_t{1}}}};
  const int n = 10000;
  Eigen::MatrixXd samples(n, 3);
  for (int s = 0; s < n; ++s) {
    auto obj = GpSampleObjective::with_default_truth(space, static_cast<std::uint64_t>(s));
    for (int j = 0; j < 3; ++j) samples(s, j) = obj.latent(pts[static_cast<std::size_t>(j)]);
  }
  const Eigen::RowVectorXd mean = samples.colwise().mean();
  const Eigen::MatrixXd centered = samples.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / (n - 1);
  const auto obj = GpSampleObjective::with_default_truth(space, 0);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(mean(i)) < 0.06);
    for (int j = 0; j < 3; ++j) {
      const double k = testing::oracle_kernel(space->encode(pts[i]), space->encode(pts[j]), obj.spec());
      CHECK(std::abs(cov(i, j) - k) < 0.05 * obj.spec().params.amplitude);
    }
  }
}

TEST_CASE("same query sequence gives the same function") {
  const auto space = std::make_shared<const SearchSpace>(
      std::vector<Dimension>{RealDim{0, 1}, CategoricalDim{{"a", "b", "c"}}});
  auto a = GpSampleObjective::with_default_truth(space, 42);
  auto b = GpSampleObjective::with_default_truth(space, 42);
  auto c = GpSampleObjective::with_default_truth(space, 43);
  Rng rng(1);
  bool differs = false;
  for (int i = 0; i < 30; ++i) {
    const auto cfg = space->decode(space->sample_uniform(rng));
    const double va = a.latent(cfg);
    CHECK(va == b.latent(cfg));
    CHECK(va == a.latent(cfg));
    differs = differs || va != c.latent(cfg);
  }
  CHECK(differs);
  CHECK(a.memo_size() == 30);
}

TEST_CASE("true minimum is stable under re-enumeration and memoizes the grid") {
  const auto space = std::make_shared<const SearchSpace>(std::vector<Dimension>{RealDim{0, 1}, IntegerDim{0, 4}});
  auto obj = GpSampleObjective::with_default_truth(space, 5);
  const auto m1 = obj.true_minimum(40);
  CHECK(obj.memo_size() == 200);
  const auto values = obj.memo_values();
  const auto m2 = obj.true_minimum(40);
  CHECK(m1.value == m2.value);
  CHECK(m1.config == m2.config);
  CHECK(obj.memo_values() == values);
  CHECK(m1.value == *std::min_element(values.begin(), values.end()));
  CHECK(obj.latent(m1.config) == m1.value);
}

TEST_CASE("single integer dimension enumerates five cells") {
  const auto space = std::make_shared<const SearchSpace>(std::vector<Dimension>{IntegerDim{0, 4}});
  auto obj = GpSampleObjective::with_default_truth(space, 9);
  const auto m = obj.true_minimum(200);
  CHECK(obj.memo_size() == 5);
  for (double v : obj.memo_values()) CHECK(m.value <= v);
}

TEST_CASE("true minimum matches an independent re-enumeration at density 200") {
  const auto space = std::make_shared<const SearchSpace>(std::vector<Dimension>{RealDim{0, 1}, IntegerDim{0, 4}});
  auto obj = GpSampleObjective::with_default_truth(space, 13);
  const auto m = obj.true_minimum(200);
  double best = 1e300;
  Config arg;
  for (int i = 0; i < 200; ++i) {
    const double x = i == 199 ? 1.0 : i / 199.0;
    for (std::int64_t k = 0; k <= 4; ++k) {
      const Config c{{x, k}};
      const double v = obj.latent(c);
      if (v < best) {
        best = v;
        arg = c;
      }
    }
  }
  CHECK(obj.memo_size() == 1000);
  CHECK(m.value == best);
  CHECK(m.config == arg);
}

TEST_CASE("memoized values do not depend on query order once enumerated") {
  const auto space = std::make_shared<const SearchSpace>(std::vector<Dimension>{IntegerDim{0, 9}, CategoricalDim{{"a", "b"}}});
  auto ref = GpSampleObjective::with_default_truth(space, 11);
  ref.true_minimum(2);
  auto grid = ref.grid(2);
  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(grid.begin(), grid.end(), rng);
    auto other = GpSampleObjective::with_default_truth(space, 11);
    other.true_minimum(2);
    for (const auto& c : grid) CHECK(other.latent(c) == ref.latent(c));
  }
}

TEST_CASE("signed zero shares a cell") {
  const auto space = std::make_shared<const SearchSpace>(std::vector<Dimension>{RealDim{-1, 1}});
  auto obj = GpSampleObjective::with_default_truth(space, 2);
  const double a = obj.latent(Config{{0.0}});
  CHECK(obj.latent(Config{{-0.0}}) == a);
  CHECK(obj.memo_size() == 1);
}

TEST_CASE("noisy queries") {
  const auto space = std::make_shared<const SearchSpace>(std::vector<Dimension>{RealDim{0, 1}});
  auto obj = GpSampleObjective::with_default_truth(space, 2);
  Rng rng(1);
  const Config c{{0.5}};
  CHECK(obj.query(c, NoiseModel{0.0}, rng) == obj.latent(c));
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double e = obj.query(c, NoiseModel{0.04}, rng) - obj.latent(c);
    sum += e;
    sq += e * e;
  }
  CHECK(std::abs(sum / n) < 0.005);
  CHECK(sq / n == doctest::Approx(0.04).epsilon(0.05));
  CHECK_THROWS_AS(obj.query(c, NoiseModel{-1.0}, rng), Error);
  CHECK_THROWS_AS(obj.latent(Config{{2.0}}), Error);
}

TEST_CASE("seed mixing") {
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
  CHECK(mix_seed(0, 0) != mix_seed(0, 1));
}
