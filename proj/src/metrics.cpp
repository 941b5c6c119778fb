#include "mlrules/metrics.hpp"

#include <stdexcept>

namespace mlrules {

OutcomeGrid::OutcomeGrid(std::vector<std::size_t> labels, std::vector<std::size_t> examples, ExampleMask covered,
                         std::vector<Cell> cells)
    : labels_(std::move(labels)), examples_(std::move(examples)), covered_(std::move(covered)), cells_(std::move(cells)) {
  if (covered_.size() != examples_.size() || cells_.size() != labels_.size() * examples_.size())
    throw std::invalid_argument("outcome grid dimensions do not match");
  for (std::size_t h = 0; h < labels_.size(); ++h) {
    for (std::size_t col = 0; col < examples_.size(); ++col) {
      const Cell c = cell(h, col);
      const bool predicted = c == Cell::tp || c == Cell::fp;
      if (predicted != covered_.test(col)) throw std::invalid_argument("outcome grid cell contradicts coverage");
    }
  }
}

OutcomeGrid rule_outcome_grid(const Head& head, const ExampleMask& coverage, const Dataset& d,
                              const ExampleMask& universe) {
  if (head.empty()) throw std::invalid_argument("outcome grid of an empty head");
  if (coverage.size() != d.num_examples() || universe.size() != d.num_examples())
    throw std::invalid_argument("coverage mask length differs from the number of examples");

  std::vector<std::size_t> labels;
  for (const auto& a : head) labels.push_back(a.label);
  std::vector<std::size_t> examples;
  for (auto j = universe.find_first(); j != ExampleMask::npos; j = universe.find_next(j)) examples.push_back(j);

  ExampleMask covered(examples.size());
  for (std::size_t col = 0; col < examples.size(); ++col) covered[col] = coverage.test(examples[col]);

  std::vector<Cell> cells;
  cells.reserve(labels.size() * examples.size());
  for (const auto& a : head) {
    const Prediction asserted = a.value ? Prediction::present : Prediction::absent;
    for (std::size_t col = 0; col < examples.size(); ++col) {
      const bool truth = d.label(examples[col], a.label);
      cells.push_back(classify_outcome(truth, covered.test(col) ? asserted : Prediction::abstain));
    }
  }
  return OutcomeGrid(std::move(labels), std::move(examples), std::move(covered), std::move(cells));
}

OutcomeGrid rule_outcome_grid(const Head& head, const ExampleMask& coverage, const Dataset& d) {
  return rule_outcome_grid(head, coverage, d, d.all_examples());
}

ConfusionMatrix micro_aggregate(const OutcomeGrid& grid) {
  ConfusionMatrix c;
  for (std::size_t h = 0; h < grid.num_labels(); ++h)
    for (std::size_t col = 0; col < grid.num_examples(); ++col) c.add(grid.cell(h, col));
  return c;
}

Metric Metric::f_measure(Rational beta) {
  if (beta < Rational(0)) throw std::invalid_argument("F-measure beta must be non-negative");
  return Metric(MetricKind::f_measure, beta);
}

Metric Metric::parse(std::string_view name, Rational beta) {
  if (const auto colon = name.find(':'); colon != std::string_view::npos) {
    if (name.substr(0, colon) != "f-measure") throw std::invalid_argument("only f-measure takes a parameter");
    return f_measure(Rational::parse(name.substr(colon + 1)));
  }
  if (name == "precision") return precision();
  if (name == "hamming") return hamming_accuracy();
  if (name == "f-measure") return f_measure(beta);
  if (name == "subset-accuracy") return subset_accuracy();
  if (name == "recall") return recall();
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

std::string Metric::name() const {
  switch (kind_) {
    case MetricKind::precision: return "precision";
    case MetricKind::hamming_accuracy: return "hamming";
    case MetricKind::f_measure: return "f-measure:" + beta_.to_string();
    case MetricKind::subset_accuracy: return "subset-accuracy";
    case MetricKind::recall: return "recall";
  }
  return {};
}

namespace {

Rational ratio(std::uint64_t num, std::uint64_t den) {
  return Rational::ratio_or_zero(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational score_micro(const Metric& metric, const ConfusionMatrix& c) {
  switch (metric.kind()) {
    case MetricKind::precision:
      return ratio(c.tp, c.predicted());
    case MetricKind::hamming_accuracy:
      return ratio(c.tp + c.tn, c.total());
    case MetricKind::recall:
      return ratio(c.tp, c.relevant());
    case MetricKind::f_measure: {
      // (b+1)/(b/R + 1/P) with b = beta^2, cleared of the inner fractions:
      // (b+1)TP / ((b+1)TP + b*FN + FP). Zero when TP = 0.
      const Rational b = metric.beta() * metric.beta();
      const auto tp = static_cast<std::int64_t>(c.tp);
      const Rational num = (b + 1) * tp;
      const Rational den = num + b * static_cast<std::int64_t>(c.fn) + static_cast<std::int64_t>(c.fp);
      return den == Rational(0) ? Rational(0) : num / den;
    }
    case MetricKind::subset_accuracy:
      break;
  }
  throw std::invalid_argument("subset accuracy is not a function of the micro-averaged confusion matrix");
}

Rational score_subset_accuracy(const OutcomeGrid& grid) {
  if (grid.num_examples() == 0) throw std::invalid_argument("subset accuracy over zero examples");
  std::int64_t correct = 0;
  for (std::size_t col = 0; col < grid.num_examples(); ++col) {
    bool exact = true;
    for (std::size_t h = 0; h < grid.num_labels() && exact; ++h) {
      const Cell c = grid.cell(h, col);
      exact = c == Cell::tp || c == Cell::tn;
    }
    correct += exact ? 1 : 0;
  }
  return Rational(correct, static_cast<std::int64_t>(grid.num_examples()));
}

Rational evaluate_head(const Head& head, const ExampleMask& coverage, const Dataset& d, const ExampleMask& universe,
                       const Metric& metric) {
  const OutcomeGrid grid = rule_outcome_grid(head, coverage, d, universe);
  if (metric.kind() == MetricKind::subset_accuracy) return score_subset_accuracy(grid);
  return score_micro(metric, micro_aggregate(grid));
}

}  // namespace mlrules
