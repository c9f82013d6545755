#pragma once
// Experiment orchestration: JSON config in, reproducible CSV artifacts plus a
// manifest (config echo, code version, per-file content hashes) and a
// markdown summary with pass/fail lines out.  Reruns with the same config and
// seed are byte-identical.
#include <cstdint>
#include <string>
#include <vector>

namespace hardcore {

struct ExperimentConfig {
  std::string name;  // phase_diagram | ratio_convergence | bottleneck_trend | conditioning
  int d = 3;
  std::vector<double> lambda_grid;
  std::vector<int> n_list;
  int n_samples = 0;  // graphs per (lambda, n) cell where sampling applies
  bool has_seed = false;
  std::uint64_t seed = 0;
  int t = 0;  // barrier threshold for bottleneck_trend
  std::string out_dir;
  int threads = 1;
};

// parse a JSON config file; unknown keys rejected
ExperimentConfig load_config(const std::string& path);

// declarative checks; empty list iff the config is runnable
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

struct CheckLine {
  std::string text;
  bool passed = false;
  bool asserted = true;  // informational lines never fail the run
};

struct ExperimentResult {
  std::string dir;
  std::vector<std::string> files;  // artifact files, relative to dir
  std::vector<CheckLine> checks;
  bool all_passed = true;  // conjunction over asserted checks
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// 64-bit FNV-1a over a file's bytes, as a fixed-width hex string
std::string fnv1a64_file(const std::string& path);

// the one double-to-text formatting used in every CSV (round-trip exact)
std::string format_double(double x);

}  // namespace hardcore
