#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hardcore/experiment.hpp"

using namespace hardcore;
namespace fs = std::filesystem;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = (fs::temp_directory_path() / name).string();
  std::ofstream out(path);
  out << content;
  return path;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config loading") {
  const auto path = write_temp("cfg_ok.json", R"({
    "name": "conditioning", "d": 3, "seed": 7, "out_dir": "exp_out_a", "threads": 1
  })");
  const auto cfg = load_config(path);
  CHECK(cfg.name == "conditioning");
  CHECK(cfg.d == 3);
  CHECK(cfg.has_seed);
  CHECK(cfg.seed == 7);
  CHECK(validate_config(cfg).empty());
  std::remove(path.c_str());
}

TEST_CASE("unknown keys and broken JSON are rejected") {
  const auto bad = write_temp("cfg_bad.json", R"({"name": "conditioning", "dd": 3})");
  CHECK_THROWS_AS(load_config(bad), std::invalid_argument);
  std::remove(bad.c_str());
  const auto syntax = write_temp("cfg_syntax.json", "{name:");
  CHECK_THROWS_AS(load_config(syntax), std::invalid_argument);
  std::remove(syntax.c_str());
}

TEST_CASE("validation names the offending fields") {
  ExperimentConfig cfg;
  cfg.name = "phase_diagram";
  cfg.d = 3;
  cfg.out_dir = "x";
  auto v = validate_config(cfg);  // missing seed, empty lambda grid
  bool saw_seed = false, saw_grid = false;
  for (const auto& s : v) {
    if (s.find("seed") != std::string::npos) saw_seed = true;
    if (s.find("lambda_grid") != std::string::npos) saw_grid = true;
  }
  CHECK(saw_seed);
  CHECK(saw_grid);

  cfg.has_seed = true;
  cfg.lambda_grid = {3.5, 4.0, 4.5};
  CHECK(validate_config(cfg).empty());

  ExperimentConfig rc;
  rc.name = "ratio_convergence";
  rc.d = 3;
  rc.has_seed = true;
  rc.out_dir = "x";
  rc.n_list = {30, 61};
  v = validate_config(rc);
  bool saw_n = false;
  for (const auto& s : v)
    if (s.find("n_list") != std::string::npos && s.find("61") != std::string::npos) saw_n = true;
  CHECK(saw_n);

  ExperimentConfig unk;
  unk.name = "not_an_experiment";
  unk.d = 3;
  unk.has_seed = true;
  unk.out_dir = "x";
  CHECK(!validate_config(unk).empty());
}

TEST_CASE("invalid config makes run_experiment throw") {
  ExperimentConfig cfg;
  cfg.name = "phase_diagram";
  cfg.d = 3;
  cfg.has_seed = true;
  cfg.seed = 1;
  cfg.out_dir = "exp_out_invalid";
  // empty lambda grid
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("phase diagram shows the pitchfork and passes its checks") {
  ExperimentConfig cfg;
  cfg.name = "phase_diagram";
  cfg.d = 3;
  cfg.lambda_grid = {3.5, 3.75, 4.0, 4.25, 4.5, 4.75, 5.0};
  cfg.has_seed = true;
  cfg.seed = 1;
  cfg.out_dir = "exp_out_phase";
  const auto res = run_experiment(cfg);
  CHECK(res.all_passed);

  const std::string csv = slurp(fs::path(cfg.out_dir) / "phase_diagram.csv");
  CHECK(csv.find("lambda,p_star,p1,p2,is_unique") == 0);
  // at least one grid row above the critical activity with a split pair
  CHECK(csv.find(",0\n") != std::string::npos);
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("ratio convergence errs monotonically") {
  ExperimentConfig cfg;
  cfg.name = "ratio_convergence";
  cfg.d = 3;
  cfg.n_list = {30, 60};
  cfg.has_seed = true;
  cfg.seed = 1;
  cfg.out_dir = "exp_out_ratio";
  const auto res = run_experiment(cfg);
  CHECK(res.all_passed);
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("conditioning experiment reruns byte-identically") {
  ExperimentConfig cfg;
  cfg.name = "conditioning";
  cfg.d = 3;
  cfg.has_seed = true;
  cfg.seed = 3;
  cfg.out_dir = "exp_out_cond1";
  const auto r1 = run_experiment(cfg);
  CHECK(r1.all_passed);
  cfg.out_dir = "exp_out_cond2";
  const auto r2 = run_experiment(cfg);
  CHECK(slurp("exp_out_cond1/conditioning.csv") == slurp("exp_out_cond2/conditioning.csv"));
  CHECK(slurp("exp_out_cond1/summary.md") == slurp("exp_out_cond2/summary.md"));
  fs::remove_all("exp_out_cond1");
  fs::remove_all("exp_out_cond2");
}

TEST_CASE("bottleneck trend output is independent of the thread count") {
  ExperimentConfig cfg;
  cfg.name = "bottleneck_trend";
  cfg.d = 3;
  cfg.lambda_grid = {0.5, 4.4};
  cfg.n_list = {4, 6};
  cfg.n_samples = 8;
  cfg.t = 0;
  cfg.has_seed = true;
  cfg.seed = 11;
  cfg.threads = 1;
  cfg.out_dir = "exp_out_bt1";
  run_experiment(cfg);
  cfg.threads = 4;
  cfg.out_dir = "exp_out_bt4";
  run_experiment(cfg);
  CHECK(slurp("exp_out_bt1/bottleneck_trend.csv") == slurp("exp_out_bt4/bottleneck_trend.csv"));
  fs::remove_all("exp_out_bt1");
  fs::remove_all("exp_out_bt4");
}

TEST_CASE("manifest lists every output with its hash") {
  ExperimentConfig cfg;
  cfg.name = "conditioning";
  cfg.d = 4;
  cfg.has_seed = true;
  cfg.seed = 9;
  cfg.out_dir = "exp_out_manifest";
  const auto res = run_experiment(cfg);

  const std::string manifest = slurp(fs::path(cfg.out_dir) / "manifest.json");
  CHECK(manifest.find("\"experiment\": \"conditioning\"") != std::string::npos);
  CHECK(manifest.find("\"code_version\"") != std::string::npos);
  for (const auto& f : res.files) {
    if (f == "manifest.json") continue;
    CHECK(manifest.find("\"" + f + "\"") != std::string::npos);
    const std::string hash = fnv1a64_file((fs::path(cfg.out_dir) / f).string());
    CHECK(manifest.find(hash) != std::string::npos);
  }
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("number formatting round-trips doubles") {
  for (double x : {1.0 / 3, 2.3e-17, 1.6875, 123456789.123456789}) {
    const std::string s = format_double(x);
    CHECK(std::stod(s) == x);
  }
}
