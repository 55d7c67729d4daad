#include <doctest.h>

#include "mixedbo/error.hpp"
#include "support.hpp"

using namespace mixedbo;

namespace {

SearchSpace example_space() {
  return SearchSpace::from_json(nlohmann::json::parse(R"({"dims":[
    {"kind":"real","lower":-10,"upper":0},
    {"kind":"integer","lower":1,"upper":6},
    {"kind":"categorical","labels":["linear","sigmoid","tanh","relu"]}]})"));
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("json round trip and layout of the encoding") {
  const auto s = example_space();
  CHECK(s.num_dims() == 3);
  CHECK(s.encoded_width() == 6);
  CHECK(s.offset(0) == 0);
  CHECK(s.offset(1) == 1);
  CHECK(s.offset(2) == 2);
  CHECK(s.lower_bounds() == std::vector<double>{-10, 1, 0, 0, 0, 0});
  CHECK(s.upper_bounds() == std::vector<double>{0, 6, 1, 1, 1, 1});
  CHECK(SearchSpace::from_json(s.to_json()) == s);
  CHECK(s.num_real_dims() == 1);
  CHECK(s.num_discrete_combinations() == 24);
}

TEST_CASE("malformed spaces are rejected") {
  const auto bad = [](const char* text) {
    return code_of([&] { SearchSpace::from_json(nlohmann::json::parse(text)); });
  };
  CHECK(bad(R"({"dims":[]})") == ErrorCode::InvalidArgument);
  CHECK(bad(R"([])") == ErrorCode::InvalidArgument);
  CHECK(bad(R"({"dims":[{"kind":"real","lower":1,"upper":1}]})") == ErrorCode::InvalidArgument);
  CHECK(bad(R"({"dims":[{"kind":"integer","lower":3,"upper":2}]})") == ErrorCode::InvalidArgument);
  CHECK(bad(R"({"dims":[{"kind":"categorical","labels":["a"]}]})") == ErrorCode::InvalidArgument);
  CHECK(bad(R"({"dims":[{"kind":"categorical","labels":["a","a"]}]})") == ErrorCode::InvalidArgument);
  CHECK(bad(R"({"dims":[{"kind":"ordinal"}]})") == ErrorCode::InvalidArgument);
  CHECK(bad(R"({"dims":[{"kind":"real","lower":"x","upper":1}]})") == ErrorCode::InvalidArgument);
}

TEST_CASE("encode uses one-hot blocks and raw values") {
  const auto s = example_space();
  const Config c{{-2.5, std::int64_t{4}, std::string("tanh")}};
  CHECK(s.encode(c) == RelaxedPoint{-2.5, 4, 0, 0, 1, 0});
  CHECK(s.decode(s.encode(c)) == c);
}

TEST_CASE("transform rounds half up, clamps and snaps to the argmax") {
  const auto s = example_space();
  CHECK(s.transform(RelaxedPoint{-3.3, 2.5, 0.1, 0.7, 0.7, 0.2}) ==
        RelaxedPoint{-3.3, 3, 0, 1, 0, 0});
  CHECK(s.transform(RelaxedPoint{-3.3, 2.4999, 0.3, 0.3, 0.3, 0.3}) ==
        RelaxedPoint{-3.3, 2, 1, 0, 0, 0});
  CHECK(s.transform(RelaxedPoint{0, 0.2, 0, 0, 0, 1})[1] == 1.0);
  CHECK(s.transform(RelaxedPoint{0, 6.4, 0, 0, 0, 1})[1] == 6.0);
  CHECK(round_half_up(-2.5) == -2.0);
  CHECK(round_half_up(2.5) == 3.0);
}

TEST_CASE("wrong widths and invalid configs") {
  const auto s = example_space();
  CHECK(code_of([&] { s.transform(RelaxedPoint{1, 2}); }) == ErrorCode::Dimension);
  CHECK(code_of([&] { s.decode(RelaxedPoint{1, 2, 3, 4, 5, 6, 7}); }) == ErrorCode::Dimension);
  CHECK(code_of([&] { s.validate(Config{{-1.0}}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([&] { s.validate(Config{{1.0, std::int64_t{2}, std::string("relu")}}); }) ==
        ErrorCode::InvalidConfig);
  CHECK(code_of([&] { s.validate(Config{{-1.0, std::int64_t{7}, std::string("relu")}}); }) ==
        ErrorCode::InvalidConfig);
  CHECK(code_of([&] { s.validate(Config{{-1.0, 2.0, std::string("relu")}}); }) ==
        ErrorCode::InvalidConfig);
  CHECK(code_of([&] { s.validate(Config{{-1.0, std::int64_t{2}, std::string("gelu")}}); }) ==
        ErrorCode::InvalidConfig);
  CHECK(code_of([&] { s.encode(Config{{std::nan(""), std::int64_t{2}, std::string("relu")}}); }) ==
        ErrorCode::InvalidConfig);
}

TEST_CASE("config json conversion") {
  const auto s = example_space();
  const Config c{{-0.5, std::int64_t{6}, std::string("relu")}};
  const auto j = s.config_to_json(c);
  CHECK(j.dump() == R"([-0.5,6,"relu"])");
  CHECK(s.config_from_json(j) == c);
  CHECK(s.config_from_json(nlohmann::json::parse("[-1, 3.0, \"linear\"]")) ==
        Config{{-1.0, std::int64_t{3}, std::string("linear")}});
  CHECK(code_of([&] { s.config_from_json(nlohmann::json::parse("[-1, 3.5, \"linear\"]")); }) ==
        ErrorCode::InvalidConfig);
  CHECK(code_of([&] { s.config_from_json(nlohmann::json::parse("[-1, 3]")); }) ==
        ErrorCode::InvalidConfig);
  CHECK(code_of([&] { s.config_from_json(nlohmann::json::parse("{}")); }) ==
        ErrorCode::InvalidConfig);
}

TEST_CASE("uniform samples lie in the box and are seed-deterministic") {
  const auto s = example_space();
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto p = s.sample_uniform(rng);
    CHECK(s.contains(p));
  }
  CHECK(s.sample_uniform(std::uint64_t{9}) == s.sample_uniform(std::uint64_t{9}));
  CHECK_FALSE(s.contains(RelaxedPoint{1, 2, 0, 0, 0, 0}));
  CHECK_FALSE(s.contains(RelaxedPoint{-1, 2}));
}

TEST_CASE("integer dimension with a single value") {
  const SearchSpace s({IntegerDim{2, 2}});
  CHECK(s.transform(RelaxedPoint{2.4}) == RelaxedPoint{2});
  CHECK(s.num_discrete_combinations() == 1);
}

TEST_CASE("transform algebra on random spaces") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = testing::random_space(rng);
    const auto p = s->sample_uniform(rng);
    const auto t = s->transform(p);
    CHECK(s->transform(t) == t);
    const auto c = s->decode(p);
    CHECK(s->encode(c) == t);
    CHECK(s->decode(s->encode(c)) == c);
  }
}
