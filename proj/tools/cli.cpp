#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "mlrules/dataset.hpp"
#include "mlrules/head_search.hpp"
#include "mlrules/induction.hpp"
#include "mlrules/model.hpp"

namespace mlrules::cli {
namespace {

class BenchmarkMismatch : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes next to the target and renames, so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw std::runtime_error("cannot write '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

void emit(const RunConfig& config, const std::string& content, std::ostream& out) {
  if (config.output_path.empty()) out << content;
  else write_file_atomic(config.output_path, content);
}

Metric make_metric(const RunConfig& config) { return Metric::parse(config.metric, Rational::parse(config.beta)); }

SearchConfig make_search(const RunConfig& config) {
  SearchConfig s;
  s.allow_negative = config.negative_heads;
  s.strategy = parse_strategy(config.strategy);
  s.max_head_size = config.single_label_heads ? 1 : 0;
  return s;
}

void check_compatible(const Metric& metric, SearchStrategy strategy) {
  if (strategy == SearchStrategy::decomposable && !metric.is_decomposable())
    throw IncompatibleStrategyError("strategy 'decomposable' cannot be used with metric '" + metric.name() + "'");
}

int train(const RunConfig& config, std::ostream& out) {
  ModelConfig cfg;
  cfg.induction.metric = make_metric(config);
  cfg.induction.search = make_search(config);
  cfg.induction.min_coverage = config.min_coverage;
  cfg.induction.max_conditions = config.max_conditions;
  cfg.tau = Rational::parse(config.tau);
  cfg.max_rules = config.max_rules;
  check_compatible(cfg.induction.metric, cfg.induction.search.strategy);
  if (config.min_coverage == 0) throw std::invalid_argument("--min-coverage must be at least 1");
  if (cfg.tau < Rational(0) || cfg.tau > Rational(1)) throw std::invalid_argument("--tau must lie in [0,1]");

  const Dataset d = load_dataset(config.data_path, LabelSpec::parse(config.label_spec));
  const RuleList model = learn_model(d, cfg);
  write_file_atomic(config.model_path, serialize_model(model));

  std::ostringstream summary;
  summary << "rules " << model.rules.size() << '\n';
  for (std::size_t k = 0; k < model.rules.size(); ++k) {
    const auto& r = model.rules[k];
    summary << "rule " << k + 1 << ": " << render_rule(r, model) << "  (" << r.train_confusion.tp << ','
            << r.train_confusion.fp << ") h=" << r.train_h << '\n';
  }
  if (d.num_examples() > 0) summary << "# training evaluation\n" << render_report(evaluate_model(model, d));
  emit(config, summary.str(), out);
  return kOk;
}

RuleList load_model_for(const RunConfig& config, const Dataset& d) {
  RuleList model = parse_model(read_file(config.model_path), d.attributes());
  check_schema(model, d);
  return model;
}

int predict_cmd(const RunConfig& config, std::ostream& out) {
  const Dataset d = load_dataset(config.data_path, LabelSpec::parse(config.label_spec));
  const RuleList model = load_model_for(config, d);
  std::ostringstream rows;
  for (std::size_t j = 0; j < d.num_examples(); ++j) {
    const auto y = predict(model, d.features(j));
    for (std::size_t i = 0; i < y.size(); ++i) rows << (i ? "," : "") << static_cast<int>(y[i]);
    rows << '\n';
  }
  emit(config, rows.str(), out);
  return kOk;
}

int evaluate_cmd(const RunConfig& config, std::ostream& out) {
  const Dataset d = load_dataset(config.data_path, LabelSpec::parse(config.label_spec));
  const RuleList model = load_model_for(config, d);
  emit(config, render_report(evaluate_model(model, d)), out);
  return kOk;
}

Dataset synthetic_dataset(std::size_t m, std::size_t n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<std::vector<double>> features(m);
  std::vector<std::vector<std::uint8_t>> labels(m, std::vector<std::uint8_t>(n));
  for (auto& row : labels)
    for (auto& bit : row) bit = coin(rng) ? 1 : 0;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("l" + std::to_string(i + 1));
  return Dataset("synthetic", {}, std::move(names), std::move(features), std::move(labels));
}

int benchmark(const RunConfig& config, std::ostream& out) {
  const Metric metric = make_metric(config);
  SearchConfig base = make_search(config);
  base.max_head_size = 0;

  std::vector<SearchStrategy> strategies;
  for (const auto& name : config.strategies) {
    strategies.push_back(parse_strategy(name));
    check_compatible(metric, strategies.back());
  }
  if (strategies.empty()) throw std::invalid_argument("no strategies to benchmark");

  std::mt19937_64 rng(config.seed);
  Dataset d;
  std::vector<ExampleMask> bodies;
  if (config.synthetic) {
    d = synthetic_dataset(config.synthetic->first, config.synthetic->second, rng);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t b = 0; b < config.synthetic_bodies; ++b) {
      ExampleMask mask(d.num_examples());
      for (std::size_t j = 0; j < d.num_examples(); ++j) mask[j] = coin(rng);
      bodies.push_back(std::move(mask));
    }
  } else {
    d = load_dataset(config.data_path, LabelSpec::parse(config.label_spec));
    if (!config.body.empty()) {
      bodies.push_back(coverage(parse_body(config.body, d.attributes()), d));
    } else {
      // The bodies the first refinement step of rule learning explores.
      bodies.push_back(d.all_examples());
      for (const auto& c : candidate_conditions(d, d.all_examples(), {})) bodies.push_back(coverage(Body{c}, d));
    }
  }
  if (d.num_examples() == 0) throw DatasetError("benchmark needs at least one example");

  struct Mode {
    std::string name;
    SearchConfig cfg;
    bool checked;  // part of the best_h equality check
  };
  std::vector<Mode> modes;
  for (const auto s : strategies) {
    SearchConfig cfg = base;
    cfg.strategy = s;
    modes.push_back({std::string(strategy_name(s)), cfg, true});
  }
  if (config.single_label_heads) {
    SearchConfig cfg = base;
    cfg.strategy = SearchStrategy::automatic;
    cfg.max_head_size = 1;
    modes.push_back({"single-label", cfg, false});
  }

  std::vector<BenchmarkRow> rows(modes.size());
  std::vector<std::optional<Rational>> best(modes.size());
  for (std::size_t b = 0; b < bodies.size(); ++b) {
    const SearchProblem problem(d, bodies[b]);
    std::optional<Rational> reference;
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const auto start = std::chrono::steady_clock::now();
      const SearchOutcome o = find_best_head(problem, metric, modes[k].cfg);
      const auto stop = std::chrono::steady_clock::now();
      rows[k].evaluated += o.evaluated_count;
      rows[k].pruned += o.pruned_count;
      rows[k].wall_ms += std::chrono::duration<double, std::milli>(stop - start).count();
      if (!best[k] || o.best_h > *best[k]) best[k] = o.best_h;
      if (!modes[k].checked) continue;
      if (!reference) reference = o.best_h;
      else if (*reference != o.best_h)
        throw BenchmarkMismatch("best_h mismatch on body " + std::to_string(b) + ": " + reference->to_string() +
                                " vs " + o.best_h.to_string() + " (" + modes[k].name + ")");
    }
  }

  std::ostringstream table;
  table << "# metric=" << metric.name() << " negatives=" << (base.allow_negative ? "on" : "off")
        << " bodies=" << bodies.size() << " examples=" << d.num_examples() << " labels=" << d.num_labels() << '\n';
  table << std::left << std::setw(14) << "strategy" << std::setw(12) << "evaluated" << std::setw(10) << "pruned";
  if (config.timing) table << std::setw(12) << "time_ms";
  table << "best_h\n";
  for (std::size_t k = 0; k < modes.size(); ++k) {
    rows[k].strategy = modes[k].name;
    rows[k].best_h = best[k]->to_string();
    table << std::left << std::setw(14) << rows[k].strategy << std::setw(12) << rows[k].evaluated << std::setw(10)
          << rows[k].pruned;
    if (config.timing) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", rows[k].wall_ms);
      table << std::setw(12) << buf;
    }
    table << rows[k].best_h << '\n';
  }
  emit(config, table.str(), out);
  return kOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::train: return train(config, out);
      case Command::predict: return predict_cmd(config, out);
      case Command::evaluate: return evaluate_cmd(config, out);
      case Command::benchmark: return benchmark(config, out);
    }
  } catch (const IncompatibleStrategyError& e) {
    err << "error: " << e.what() << '\n';
    return kIncompatible;
  } catch (const SearchLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kIncompatible;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const DatasetError& e) {
    err << "error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const ModelFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const SchemaMismatchError& e) {
    err << "error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kRuntimeFailure;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-label rule learner with pruned multi-label head search", "mlrules"};
  app.require_subcommand(1);
  RunConfig config;

  const auto add_search_options = [&](CLI::App* sub) {
    sub->add_option("--metric", config.metric, "precision, hamming, f-measure or subset-accuracy")
        ->check(CLI::IsMember({"precision", "hamming", "f-measure", "subset-accuracy"}));
    sub->add_option("--beta", config.beta, "F-measure beta (decimal or fraction)");
    sub->add_flag("!--no-negative-heads", config.negative_heads, "only predict label presence in heads");
    sub->add_flag("--single-label-heads", config.single_label_heads, "restrict heads to one label");
  };
  const auto add_data_options = [&](CLI::App* sub) {
    sub->add_option("--data", config.data_path, "ARFF file")->required();
    sub->add_option("--labels", config.label_spec, "xml:<path>, last:<k> or first:<k>")->required();
  };

  auto* train_cmd = app.add_subcommand("train", "learn a rule list");
  add_data_options(train_cmd);
  add_search_options(train_cmd);
  train_cmd->add_option("--strategy", config.strategy, "auto, exhaustive, pruned or decomposable")
      ->check(CLI::IsMember({"auto", "exhaustive", "pruned", "decomposable"}));
  train_cmd->add_option("--min-coverage", config.min_coverage, "minimum examples a rule must cover");
  train_cmd->add_option("--max-conditions", config.max_conditions, "maximum refinement steps per rule");
  train_cmd->add_option("--tau", config.tau, "fraction of predicted labels that removes an example");
  train_cmd->add_option("--max-rules", config.max_rules, "maximum number of rules");
  train_cmd->add_option("--model", config.model_path, "model file to write")->required();
  train_cmd->add_option("--summary", config.output_path, "training summary file (default stdout)");

  auto* predict_sub = app.add_subcommand("predict", "predict label vectors");
  add_data_options(predict_sub);
  predict_sub->add_option("--model", config.model_path, "model file")->required();
  predict_sub->add_option("--output", config.output_path, "predictions file (default stdout)");

  auto* evaluate_sub = app.add_subcommand("evaluate", "evaluate a model on labelled data");
  add_data_options(evaluate_sub);
  evaluate_sub->add_option("--model", config.model_path, "model file")->required();
  evaluate_sub->add_option("--report", config.output_path, "report file (default stdout)");

  auto* bench_sub = app.add_subcommand("benchmark", "compare head search strategies");
  bench_sub->add_option("--data", config.data_path, "ARFF file");
  bench_sub->add_option("--labels", config.label_spec, "xml:<path>, last:<k> or first:<k>");
  add_search_options(bench_sub);
  bench_sub->add_option("--strategies", config.strategies, "comma-separated strategies")->delimiter(',');
  bench_sub->add_option("--body", config.body, "benchmark a single body, e.g. 'cov=yes'");
  std::vector<std::size_t> synthetic;
  bench_sub->add_option("--synthetic", synthetic, "random data: EXAMPLES LABELS")->expected(2);
  bench_sub->add_option("--bodies", config.synthetic_bodies, "random bodies for --synthetic");
  bench_sub->add_option("--seed", config.seed, "random seed for --synthetic");
  bench_sub->add_flag("!--no-timing", config.timing, "omit wall times (deterministic output)");
  bench_sub->add_option("--output", config.output_path, "table file (default stdout)");

  std::vector<std::string> storage{"mlrules"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadArguments;
  }

  if (train_cmd->parsed()) config.command = Command::train;
  else if (predict_sub->parsed()) config.command = Command::predict;
  else if (evaluate_sub->parsed()) config.command = Command::evaluate;
  else config.command = Command::benchmark;

  if (synthetic.size() == 2) {
    if (synthetic[0] == 0 || synthetic[1] == 0) {
      err << "error: --synthetic needs at least one example and one label\n";
      return kBadArguments;
    }
    config.synthetic = std::make_pair(synthetic[0], synthetic[1]);
  }
  if (config.command == Command::benchmark && !config.synthetic &&
      (config.data_path.empty() || config.label_spec.empty())) {
    err << "error: benchmark needs --data and --labels, or --synthetic\n";
    return kBadArguments;
  }
  return run(config, out, err);
}

}  // namespace mlrules::cli
