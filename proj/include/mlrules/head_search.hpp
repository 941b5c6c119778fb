#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mlrules/dataset.hpp"
#include "mlrules/head.hpp"
#include "mlrules/metrics.hpp"
#include "mlrules/rational.hpp"

namespace mlrules {

enum class SearchStrategy { automatic, exhaustive, pruned_bfs, decomposable };

/// "auto", "exhaustive", "pruned", "decomposable".
SearchStrategy parse_strategy(std::string_view name);
std::string_view strategy_name(SearchStrategy s);

class IncompatibleStrategyError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The label space is too large for literal enumeration.
class SearchLimitError : public std::length_error {
  using std::length_error::length_error;
};

struct SearchConfig {
  bool allow_negative = true;
  SearchStrategy strategy = SearchStrategy::automatic;
  /// 0 = unlimited; 1 restricts every strategy to single-label heads.
  std::size_t max_head_size = 0;
  /// Skip children that contain a head whose score dropped below its parent.
  /// Turning this off leaves the result unchanged and only costs evaluations.
  bool subset_veto = true;
  /// Keep every pruned head in the outcome (for soundness checks).
  bool keep_pruned_heads = false;
};

struct SearchOutcome {
  Head best_head;
  Rational best_h;
  std::size_t evaluated_count = 0;
  std::size_t pruned_count = 0;
  std::vector<Head> pruned_heads;
};

/// A fixed body's situation: the examples under consideration and the subset
/// the body covers.
struct SearchProblem {
  SearchProblem(const Dataset& d, ExampleMask coverage) : SearchProblem(d, d.all_examples(), std::move(coverage)) {}
  SearchProblem(const Dataset& d, ExampleMask universe, ExampleMask coverage)
      : data(&d), universe(std::move(universe)), coverage(std::move(coverage)) {
    if (this->universe.size() != d.num_examples() || this->coverage.size() != d.num_examples())
      throw std::invalid_argument("search masks must have one bit per example");
    this->coverage &= this->universe;
  }

  const Dataset* data;
  ExampleMask universe;
  ExampleMask coverage;
};

/// Scores heads from per-assignment statistics: micro measures add the
/// confusion matrices of the head's assignments, subset accuracy intersects
/// their sets of correctly handled examples. Equal to evaluate_head() bit for bit.
class HeadScorer {
 public:
  HeadScorer(const SearchProblem& problem, const Metric& metric);

  const Metric& metric() const { return metric_; }
  std::size_t num_labels() const { return num_labels_; }

  const ConfusionMatrix& item_confusion(LabelAssignment a) const { return confusion_[slot(a)]; }
  /// Universe examples whose cell for this assignment is TP or TN.
  const ExampleMask& item_correct(LabelAssignment a) const { return correct_[slot(a)]; }

  /// Score of an accumulated state (micro sum, correct-example set).
  Rational score(const ConfusionMatrix& c, const ExampleMask& correct) const;
  Rational score(const Head& head) const;

 private:
  static std::size_t slot(LabelAssignment a) { return 2 * a.label + (a.value ? 1 : 0); }

  Metric metric_;
  std::size_t num_labels_;
  std::size_t universe_size_;
  std::vector<ConfusionMatrix> confusion_;
  std::vector<ExampleMask> correct_;
};

/// Scores every admissible head with the from-scratch grid evaluation.
/// Guarded to n <= 16 (positive heads) and n <= 10 (with negative heads).
SearchOutcome best_head_exhaustive(const SearchProblem& problem, const Metric& metric, const SearchConfig& cfg);

/// Scores the single-label heads and merges every maximizer into one head.
/// Only valid for decomposable measures.
SearchOutcome best_head_decomposable(const SearchProblem& problem, const Metric& metric, const SearchConfig& cfg);

/// Level-wise search over heads in canonical order with anti-monotone pruning.
SearchOutcome best_head_pruned_bfs(const SearchProblem& problem, const Metric& metric, const SearchConfig& cfg);

/// Dispatches on cfg.strategy; `automatic` picks the merge for decomposable
/// measures and the pruned search otherwise.
SearchOutcome find_best_head(const SearchProblem& problem, const Metric& metric, const SearchConfig& cfg);

}  // namespace mlrules
