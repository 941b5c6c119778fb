#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mlrules::cli {

enum ExitStatus : int {
  kOk = 0,
  kRuntimeFailure = 1,
  kBadArguments = 2,
  kParseFailure = 3,
  kIncompatible = 4,
};

enum class Command { train, predict, evaluate, benchmark };

struct RunConfig {
  Command command = Command::train;
  std::string data_path;
  std::string label_spec;  // xml:<path>, last:<k>, first:<k>
  std::string model_path;
  std::string output_path;  // predictions, report, summary or benchmark table; stdout when empty

  std::string metric = "f-measure";
  std::string beta = "0.5";
  std::string strategy = "auto";
  bool negative_heads = true;
  bool single_label_heads = false;
  std::size_t min_coverage = 1;
  std::optional<std::size_t> max_conditions;
  std::string tau = "1";
  std::size_t max_rules = 1000;

  // benchmark
  std::vector<std::string> strategies{"exhaustive", "pruned", "decomposable"};
  std::string body;  // single body to benchmark, model-file syntax
  std::optional<std::pair<std::size_t, std::size_t>> synthetic;  // examples, labels
  std::size_t synthetic_bodies = 20;
  std::uint64_t seed = 1;
  bool timing = true;
};

struct BenchmarkRow {
  std::string strategy;
  std::size_t evaluated = 0;
  std::size_t pruned = 0;
  double wall_ms = 0;
  std::string best_h;
};

/// Executes one command. Diagnostics go to `err`; results go to the output
/// file when set and to `out` otherwise.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name) and runs them.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlrules::cli
