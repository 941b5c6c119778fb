#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mlrules/dataset.hpp"
#include "mlrules/induction.hpp"
#include "mlrules/rational.hpp"
#include "mlrules/rule.hpp"

namespace mlrules {

/// Data handed to a model does not match the schema it was trained on.
class SchemaMismatchError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Model text that cannot be read back (bad version, malformed line, ...).
class ModelFormatError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kModelFormatVersion = 1;

/// Decision list: rules in induction order; earlier rules take precedence.
struct RuleList {
  std::vector<Rule> rules;
  std::vector<std::string> label_names;
  std::vector<AttributeSchema> attributes;
  Metric metric = Metric::f_measure();

  std::size_t num_labels() const { return label_names.size(); }
};

struct ModelConfig {
  InductionConfig induction;
  /// An example leaves the training set once this fraction of its labels has
  /// been predicted by some rule.
  Rational tau{1};
  std::size_t max_rules = 1000;
};

/// Separate-and-conquer covering loop.
///
/// Each round learns a rule on the remaining examples, marks the head's labels
/// as predicted for every remaining example the rule covers, and removes the
/// examples whose predicted fraction reached tau. The loop ends when no example
/// remains, no rule with a positive score exists, max_rules is reached, or a
/// round removed nothing. The next round would then see the same examples and
/// learn the same rule again.
RuleList learn_model(const Dataset& d, const ModelConfig& cfg);

/// Full label vector for one instance. Labels no rule sets are 0.
std::vector<std::uint8_t> predict(const RuleList& model, std::span<const double> x);

struct EvaluationReport {
  Rational micro_precision;
  Rational micro_recall;
  Rational micro_f1;
  Rational macro_f1;
  Rational hamming_accuracy;
  Rational subset_accuracy;
  std::vector<std::string> label_names;
  std::vector<ConfusionMatrix> per_label;
  std::size_t rule_count = 0;
  Rational avg_head_size;
  Rational avg_body_length;
};

/// Standard confusion counting over full predicted vectors (no abstentions).
/// A ratio whose label set has no positives and no predictions counts as 1.
EvaluationReport evaluate_model(const RuleList& model, const Dataset& d);

/// Checks that `d` carries the model's label names and attribute layout.
void check_schema(const RuleList& model, const Dataset& d);

std::string serialize_model(const RuleList& model);
/// Attribute and category names in the text are resolved against `attributes`.
RuleList parse_model(std::string_view text, const std::vector<AttributeSchema>& attributes);

/// Comma-separated conditions in model-file syntax (`a=p, b<=2.5`).
Body parse_body(std::string_view text, const std::vector<AttributeSchema>& attributes);

/// Human-readable form: `red, ¬blue ← colors>5, stripes<=3`.
std::string render_rule(const Rule& rule, const RuleList& model);

/// Key/value report with scores at four decimals, in fixed field order.
std::string render_report(const EvaluationReport& report);

}  // namespace mlrules
