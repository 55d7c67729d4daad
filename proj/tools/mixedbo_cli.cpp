#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mixedbo/mixedbo.h"

namespace {

struct CliError {
  int exit_code;
};

void check(mbo_status status, const std::string& context) {
  if (status == MBO_OK) return;
  std::cerr << "mixedbo: " << context << ": " << mbo_status_string(status) << ": "
            << mbo_last_error() << "\n";
  throw CliError{status == MBO_ERR_INVALID_ARGUMENT || status == MBO_ERR_INVALID_CONFIG ? 2 : 1};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "mixedbo: cannot open " << path << "\n";
    throw CliError{2};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { mbo_string_free(p); }
};

using SpacePtr = std::unique_ptr<mbo_space, decltype(&mbo_space_free)>;

SpacePtr load_space(const std::string& layout, const std::string& space_file) {
  mbo_space* raw = nullptr;
  if (!space_file.empty()) {
    check(mbo_space_from_json(slurp(space_file).c_str(), &raw), "reading " + space_file);
  } else {
    check(mbo_space_from_layout(layout.c_str(), &raw), "layout " + layout);
  }
  return SpacePtr(raw, &mbo_space_free);
}

struct RunArgs {
  std::string layout, space_file, strategies = "basic,proposed,tpe", out, objective_cmd;
  int iterations = 50, repetitions = 100, hyper_samples = 10, burn_in = 50, bootstrap = 200;
  int n_init = 3, grid_density = 0, threads = 0;
  double noise = 0.0;
  std::uint64_t seed = 42;
  bool quiet = false;
};

int cmd_run(const RunArgs& a) {
  nlohmann::json cfg;
  if (!a.space_file.empty()) {
    try {
      cfg["space"] = nlohmann::json::parse(slurp(a.space_file));
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "mixedbo: " << a.space_file << ": " << e.what() << "\n";
      return 2;
    }
  } else {
    cfg["layout"] = a.layout;
  }
  cfg["strategies"] = a.strategies;
  cfg["iterations"] = a.iterations;
  cfg["repetitions"] = a.repetitions;
  cfg["noise"] = a.noise;
  cfg["hyper_samples"] = a.hyper_samples;
  cfg["burn_in"] = a.burn_in;
  cfg["bootstrap"] = a.bootstrap;
  cfg["seed"] = a.seed;
  cfg["out"] = a.out;
  cfg["n_init"] = a.n_init;
  cfg["grid_density"] = a.grid_density;
  cfg["threads"] = a.threads;
  if (!a.objective_cmd.empty()) cfg["objective_cmd"] = a.objective_cmd;

  OwnedString report;
  const mbo_status st = mbo_experiment_run(cfg.dump().c_str(), &report.p);
  if (report.p && !a.quiet) std::cout << report.p << "\n";
  check(st, "run");
  return 0;
}

struct SuggestArgs {
  std::string layout, space_file, history, strategy = "proposed";
  std::uint64_t seed = 0;
  int n_init = 3, hyper_samples = 10, burn_in = 50;
  bool noiseless = false;
};

int cmd_suggest(const SuggestArgs& a) {
  auto space = load_space(a.layout, a.space_file);
  const nlohmann::json options = {{"n_init", a.n_init},
                                  {"hyper_samples", a.hyper_samples},
                                  {"burn_in", a.burn_in},
                                  {"noiseless", a.noiseless}};
  mbo_optimizer* raw = nullptr;
  check(mbo_optimizer_create(space.get(), a.strategy.c_str(), a.seed, options.dump().c_str(), &raw),
        "creating optimizer");
  std::unique_ptr<mbo_optimizer, decltype(&mbo_optimizer_free)> opt(raw, &mbo_optimizer_free);
  if (!a.history.empty()) {
    size_t rows = 0;
    check(mbo_optimizer_load_history(opt.get(), a.history.c_str(), &rows), "loading " + a.history);
  }
  OwnedString config;
  check(mbo_optimizer_ask(opt.get(), &config.p), "suggest");
  std::cout << config.p << "\n";
  return 0;
}

struct SummarizeArgs {
  std::string layout, space_file, out;
  std::vector<std::string> records;
  int bootstrap = 200;
  std::uint64_t seed = 42;
};

int cmd_summarize(const SummarizeArgs& a) {
  auto space = load_space(a.layout, a.space_file);
  std::vector<const char*> paths;
  for (const auto& r : a.records) paths.push_back(r.c_str());
  paths.push_back(nullptr);
  check(mbo_experiment_summarize(space.get(), paths.data(), a.bootstrap, a.seed, a.out.c_str()),
        "summarize");
  return 0;
}

void add_space_options(CLI::App* cmd, std::string& layout, std::string& space_file, bool required) {
  auto* lay = cmd->add_option("--layout", layout, "Built-in layout")
                  ->check(CLI::IsMember({"2d-int", "2d-cat", "4d-int", "4d-cat"}));
  auto* spc = cmd->add_option("--space", space_file, "Search space JSON file")->check(CLI::ExistingFile);
  lay->excludes(spc);
  spc->excludes(lay);
  if (required) {
    cmd->callback([cmd, lay, spc] {
      if (lay->count() + spc->count() == 0) {
        throw CLI::RequiredError(cmd->get_name() + ": one of --layout or --space");
      }
    });
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian optimization over mixed real/integer/categorical spaces"};
  app.set_version_flag("--version", std::string(mbo_version()));
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a paired benchmark experiment");
  add_space_options(run_cmd, run.layout, run.space_file, true);
  run_cmd->add_option("--strategies", run.strategies, "Comma list of naive,basic,proposed,tpe,random")
      ->capture_default_str();
  run_cmd->add_option("--iterations", run.iterations)->capture_default_str()->check(CLI::PositiveNumber);
  run_cmd->add_option("--repetitions", run.repetitions)->capture_default_str()->check(CLI::PositiveNumber);
  run_cmd->add_option("--noise", run.noise, "Observation noise variance")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--hyper-samples", run.hyper_samples)->capture_default_str()->check(CLI::PositiveNumber);
  run_cmd->add_option("--burn-in", run.burn_in)->capture_default_str()->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--bootstrap", run.bootstrap)->capture_default_str()->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run.seed)->capture_default_str();
  run_cmd->add_option("--n-init", run.n_init, "Initial design size")->capture_default_str()
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--grid-density", run.grid_density,
                      "Points per real dimension when locating the true minimum (0 = auto)")
      ->capture_default_str();
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)")->capture_default_str();
  run_cmd->add_option("--objective-cmd", run.objective_cmd,
                      "Program reading one JSON config line on stdin and printing one number");
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_flag("--quiet", run.quiet, "Do not print the JSON report");

  SuggestArgs sug;
  auto* sug_cmd = app.add_subcommand("suggest", "Print the next configuration to evaluate");
  add_space_options(sug_cmd, sug.layout, sug.space_file, true);
  sug_cmd->add_option("--history", sug.history, "records.csv of past evaluations")
      ->check(CLI::ExistingFile);
  sug_cmd->add_option("--strategy", sug.strategy)->capture_default_str()
      ->check(CLI::IsMember({"naive", "basic", "proposed", "tpe", "random"}));
  sug_cmd->add_option("--seed", sug.seed)->capture_default_str();
  sug_cmd->add_option("--n-init", sug.n_init)->capture_default_str()->check(CLI::PositiveNumber);
  sug_cmd->add_option("--hyper-samples", sug.hyper_samples)->capture_default_str()->check(CLI::PositiveNumber);
  sug_cmd->add_option("--burn-in", sug.burn_in)->capture_default_str()->check(CLI::NonNegativeNumber);
  sug_cmd->add_flag("--noiseless", sug.noiseless, "Fix the noise variance at its floor");

  SummarizeArgs sum;
  auto* sum_cmd = app.add_subcommand("summarize", "Merge records.csv files into summary.csv and regret.svg");
  add_space_options(sum_cmd, sum.layout, sum.space_file, true);
  sum_cmd->add_option("records", sum.records, "records.csv files")->required()->check(CLI::ExistingFile);
  sum_cmd->add_option("--bootstrap", sum.bootstrap)->capture_default_str()->check(CLI::PositiveNumber);
  sum_cmd->add_option("--seed", sum.seed)->capture_default_str();
  sum_cmd->add_option("--out", sum.out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return cmd_run(run);
    if (*sug_cmd) return cmd_suggest(sug);
    if (*sum_cmd) return cmd_summarize(sum);
  } catch (const CliError& e) {
    return e.exit_code;
  }
  return 0;
}
