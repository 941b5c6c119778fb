#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mlrules/dataset.hpp"
#include "mlrules/head.hpp"
#include "mlrules/rational.hpp"

namespace mlrules {

enum class Cell : std::uint8_t { tp, fp, tn, fn };

/// What a rule says about one label of one example.
enum class Prediction : std::uint8_t { absent, present, abstain };

/// Candidate-selection counting: any asserted value that matches the truth is
/// a TP and any that does not is an FP, whether the asserted value is 0 or 1.
/// Abstentions become TN (label absent) or FN (label present).
constexpr Cell classify_outcome(bool truth, Prediction prediction) {
  if (prediction == Prediction::abstain) return truth ? Cell::fn : Cell::tn;
  return (prediction == Prediction::present) == truth ? Cell::tp : Cell::fp;
}

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t predicted() const { return tp + fp; }
  std::uint64_t relevant() const { return tp + fn; }
  std::uint64_t irrelevant() const { return fp + tn; }
  std::uint64_t total() const { return tp + fp + tn + fn; }

  void add(Cell c) {
    switch (c) {
      case Cell::tp: ++tp; break;
      case Cell::fp: ++fp; break;
      case Cell::tn: ++tn; break;
      case Cell::fn: ++fn; break;
    }
  }

  ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
  friend ConfusionMatrix operator+(ConfusionMatrix a, const ConfusionMatrix& b) { return a += b; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Cell classification of every (head label, example) pair of a rule over an
/// example universe. Labels outside the head contribute no cells.
class OutcomeGrid {
 public:
  OutcomeGrid(std::vector<std::size_t> labels, std::vector<std::size_t> examples, ExampleMask covered,
              std::vector<Cell> cells);

  std::size_t num_labels() const { return labels_.size(); }
  std::size_t num_examples() const { return examples_.size(); }
  const std::vector<std::size_t>& labels() const { return labels_; }
  /// Dataset index of each grid column.
  const std::vector<std::size_t>& examples() const { return examples_; }
  /// Coverage indexed by grid column.
  const ExampleMask& covered() const { return covered_; }
  Cell cell(std::size_t head_pos, std::size_t column) const { return cells_[head_pos * examples_.size() + column]; }

 private:
  std::vector<std::size_t> labels_;
  std::vector<std::size_t> examples_;
  ExampleMask covered_;
  std::vector<Cell> cells_;
};

/// Grid of `head` over the examples in `universe`; `coverage` is clipped to it.
/// Throws std::invalid_argument for an empty head or mismatched mask sizes.
OutcomeGrid rule_outcome_grid(const Head& head, const ExampleMask& coverage, const Dataset& d,
                              const ExampleMask& universe);
OutcomeGrid rule_outcome_grid(const Head& head, const ExampleMask& coverage, const Dataset& d);

ConfusionMatrix micro_aggregate(const OutcomeGrid& grid);

enum class MetricKind { precision, hamming_accuracy, f_measure, subset_accuracy, recall };

enum class MetricProperty { decomposable, anti_monotone };

/// Bipartition measure used to rate candidate rules.
class Metric {
 public:
  static Metric precision() { return Metric(MetricKind::precision); }
  static Metric hamming_accuracy() { return Metric(MetricKind::hamming_accuracy); }
  static Metric recall() { return Metric(MetricKind::recall); }
  static Metric subset_accuracy() { return Metric(MetricKind::subset_accuracy); }
  /// Weighted harmonic mean of precision and recall; beta < 1 favours precision.
  static Metric f_measure(Rational beta = Rational(1, 2));

  /// Accepts "precision", "hamming", "f-measure", "subset-accuracy", "recall".
  static Metric parse(std::string_view name, Rational beta = Rational(1, 2));

  MetricKind kind() const { return kind_; }
  const Rational& beta() const { return beta_; }
  MetricProperty property() const {
    return kind_ == MetricKind::subset_accuracy ? MetricProperty::anti_monotone : MetricProperty::decomposable;
  }
  bool is_decomposable() const { return property() == MetricProperty::decomposable; }
  /// Every supported measure is anti-monotone; decomposable ones trivially so.
  bool is_anti_monotone() const { return true; }

  /// Name as accepted by parse(); f-measure carries its beta ("f-measure:1/2").
  std::string name() const;

  friend bool operator==(const Metric&, const Metric&) = default;

 private:
  explicit Metric(MetricKind kind, Rational beta = Rational(1, 2)) : kind_(kind), beta_(beta) {}

  MetricKind kind_;
  Rational beta_;
};

/// Micro-averaged score of an aggregated confusion matrix. Empty denominators
/// score 0. Throws std::invalid_argument for subset accuracy, which needs the
/// per-example grid.
Rational score_micro(const Metric& metric, const ConfusionMatrix& c);

/// Fraction of grid columns whose cells are all TP or TN.
Rational score_subset_accuracy(const OutcomeGrid& grid);

/// From-scratch score of `head` under `coverage` restricted to `universe`.
Rational evaluate_head(const Head& head, const ExampleMask& coverage, const Dataset& d, const ExampleMask& universe,
                       const Metric& metric);

}  // namespace mlrules
