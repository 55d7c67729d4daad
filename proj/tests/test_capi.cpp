#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "mixedbo/mixedbo.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  mbo_string_free(s);
  return out;
}

const char* kSpace = R"({"dims":[{"kind":"real","lower":-10,"upper":0},
  {"kind":"integer","lower":1,"upper":6},
  {"kind":"categorical","labels":["linear","sigmoid","tanh","relu"]}]})";

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::string(mbo_version()) == "0.1.0");
  CHECK(std::string(mbo_status_string(MBO_OK)) == "ok");
  CHECK(std::string(mbo_status_string(MBO_ERR_SINGULAR_MODEL)) == "singular-model");
  CHECK(std::string(mbo_status_string(static_cast<mbo_status>(55))) == "unknown");
}

TEST_CASE("spaces through the C API") {
  mbo_space* space = nullptr;
  REQUIRE(mbo_space_from_json(kSpace, &space) == MBO_OK);
  CHECK(mbo_space_encoded_width(space) == 6);

  double enc[6];
  REQUIRE(mbo_space_encode(space, R"([-2.5, 4, "tanh"])", enc, 6) == MBO_OK);
  CHECK(enc[0] == -2.5);
  CHECK(enc[1] == 4.0);
  CHECK(enc[4] == 1.0);

  const double relaxed[6] = {-1.0, 2.5, 0.1, 0.8, 0.2, 0.0};
  double t[6];
  REQUIRE(mbo_space_transform(space, relaxed, t, 6) == MBO_OK);
  CHECK(t[1] == 3.0);
  CHECK(t[3] == 1.0);

  char* cfg = nullptr;
  REQUIRE(mbo_space_decode(space, relaxed, 6, &cfg) == MBO_OK);
  CHECK(take(cfg) == R"([-1.0,3,"sigmoid"])");

  char* json = nullptr;
  REQUIRE(mbo_space_to_json(space, &json) == MBO_OK);
  mbo_space* again = nullptr;
  CHECK(mbo_space_from_json(take(json).c_str(), &again) == MBO_OK);
  mbo_space_free(again);

  CHECK(mbo_space_encode(space, R"([-2.5, 4])", enc, 6) == MBO_ERR_INVALID_CONFIG);
  CHECK(std::string(mbo_last_error()).size() > 0);
  CHECK(mbo_space_encode(space, R"([-2.5, 4, "tanh"])", enc, 5) == MBO_ERR_DIMENSION);
  CHECK(mbo_space_transform(space, relaxed, t, 3) == MBO_ERR_DIMENSION);
  const double outside[6] = {5.0, 2, 1, 0, 0, 0};
  CHECK(mbo_space_decode(space, outside, 6, &cfg) == MBO_ERR_DIMENSION);
  CHECK(mbo_space_encode(space, "not json", enc, 6) == MBO_ERR_INVALID_ARGUMENT);
  mbo_space_free(space);

  mbo_space* bad = nullptr;
  CHECK(mbo_space_from_json(R"({"dims":[]})", &bad) == MBO_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(mbo_space_from_json(nullptr, &bad) == MBO_ERR_INVALID_ARGUMENT);
  CHECK(mbo_space_from_layout("4d-cat", &bad) == MBO_OK);
  CHECK(mbo_space_encoded_width(bad) == 8);
  mbo_space_free(bad);
  CHECK(mbo_space_from_layout("9d", &bad) == MBO_ERR_INVALID_ARGUMENT);
  mbo_space_free(nullptr);
}

TEST_CASE("ask/tell loop through the C API") {
  mbo_space* space = nullptr;
  REQUIRE(mbo_space_from_layout("2d-cat", &space) == MBO_OK);
  mbo_optimizer* opt = nullptr;
  REQUIRE(mbo_optimizer_create(space, "proposed", 5,
                               R"({"hyper_samples":2,"burn_in":5,"n_random":100,"n_starts":2,"tol":1e-3})",
                               &opt) == MBO_OK);
  CHECK(mbo_optimizer_tell(opt, 1.0) == MBO_ERR_INVALID_ARGUMENT);
  for (int i = 0; i < 6; ++i) {
    char* a = nullptr;
    char* b = nullptr;
    REQUIRE(mbo_optimizer_ask(opt, &a) == MBO_OK);
    REQUIRE(mbo_optimizer_ask(opt, &b) == MBO_OK);
    CHECK(take(a) == take(b));
    CHECK(mbo_optimizer_tell(opt, std::nan("")) == MBO_ERR_INVALID_OBSERVATION);
    REQUIRE(mbo_optimizer_tell(opt, 0.1 * i) == MBO_OK);
  }
  CHECK(mbo_optimizer_num_observations(opt) == 6);
  CHECK(mbo_optimizer_observe(opt, R"([0.5, "c3"])", -1.0) == MBO_OK);
  CHECK(mbo_optimizer_observe(opt, R"([0.5, "c9"])", -1.0) == MBO_ERR_INVALID_CONFIG);
  char* rec = nullptr;
  REQUIRE(mbo_optimizer_recommend(opt, MBO_RECOMMEND_BEST_OBSERVED, &rec) == MBO_OK);
  CHECK(take(rec) == R"([0.5,"c3"])");
  REQUIRE(mbo_optimizer_recommend(opt, MBO_RECOMMEND_POSTERIOR_MEAN_MIN, &rec) == MBO_OK);
  CHECK(take(rec).front() == '[');
  mbo_optimizer_free(opt);

  CHECK(mbo_optimizer_create(space, "smac", 1, nullptr, &opt) == MBO_ERR_INVALID_ARGUMENT);
  CHECK(mbo_optimizer_create(space, "tpe", 1, R"({"family":"rbf"})", &opt) == MBO_ERR_INVALID_ARGUMENT);
  CHECK(mbo_optimizer_create(space, "tpe", 1, R"({"gamma":2})", &opt) == MBO_ERR_INVALID_ARGUMENT);
  CHECK(mbo_optimizer_create(space, "tpe", 1, "[1]", &opt) == MBO_ERR_INVALID_ARGUMENT);
  mbo_space_free(space);
}

TEST_CASE("experiments, history replay and re-summarizing through the C API") {
  const auto dir = std::filesystem::temp_directory_path() / "mixedbo_capi_test";
  std::filesystem::remove_all(dir);
  const std::string cfg = R"({"layout":"2d-int","strategies":"tpe,random","iterations":4,
    "repetitions":2,"seed":1,"bootstrap":20,"grid_density":20,"out":")" + dir.string() + "\"}";
  char* report = nullptr;
  REQUIRE(mbo_experiment_run(cfg.c_str(), &report) == MBO_OK);
  const std::string r = take(report);
  CHECK(r.find("\"final\"") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "records.csv"));
  CHECK(std::filesystem::exists(dir / "summary.csv"));
  CHECK(std::filesystem::exists(dir / "regret.svg"));

  mbo_space* space = nullptr;
  REQUIRE(mbo_space_from_layout("2d-int", &space) == MBO_OK);
  mbo_optimizer* opt = nullptr;
  REQUIRE(mbo_optimizer_create(space, "tpe", 0, nullptr, &opt) == MBO_OK);
  size_t rows = 0;
  REQUIRE(mbo_optimizer_load_history(opt, (dir / "records.csv").c_str(), &rows) == MBO_OK);
  CHECK(rows == 16);
  CHECK(mbo_optimizer_num_observations(opt) == 16);
  char* next = nullptr;
  CHECK(mbo_optimizer_ask(opt, &next) == MBO_OK);
  take(next);
  CHECK(mbo_optimizer_load_history(opt, "/nonexistent.csv", &rows) == MBO_ERR_IO);
  mbo_optimizer_free(opt);

  const std::string records = (dir / "records.csv").string();
  const char* paths[] = {records.c_str(), nullptr};
  CHECK(mbo_experiment_summarize(space, paths, 20, 1, (dir / "again").c_str()) == MBO_OK);
  CHECK(std::filesystem::exists(dir / "again" / "summary.csv"));
  const char* twice[] = {records.c_str(), records.c_str(), nullptr};
  CHECK(mbo_experiment_summarize(space, twice, 20, 1, (dir / "dup").c_str()) == MBO_ERR_INVALID_ARGUMENT);
  mbo_space_free(space);

  CHECK(mbo_experiment_run(R"({"layout":"2d-int","strategies":[]})", nullptr) == MBO_ERR_INVALID_ARGUMENT);
  CHECK(mbo_experiment_run("{", nullptr) == MBO_ERR_INVALID_ARGUMENT);
  const std::string failing = R"({"space":{"dims":[{"kind":"integer","lower":0,"upper":3}]},
    "strategies":"random","iterations":2,"repetitions":1,"objective_cmd":"exit 4","out":")" +
                              (dir / "fail").string() + "\"}";
  report = nullptr;
  CHECK(mbo_experiment_run(failing.c_str(), &report) == MBO_ERR_INCOMPLETE_GRID);
  CHECK(take(report).find("exit") != std::string::npos);
  std::filesystem::remove_all(dir);
}
