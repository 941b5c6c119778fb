#include "mlrules/head_search.hpp"

#include <algorithm>
#include <string>

namespace mlrules {
namespace {

constexpr std::size_t kMaxExhaustivePositive = 16;
constexpr std::size_t kMaxExhaustiveNegative = 10;

// Every (label, value) pair a head may contain, in canonical order.
std::vector<LabelAssignment> head_items(std::size_t num_labels, bool allow_negative) {
  std::vector<LabelAssignment> items;
  for (std::size_t l = 0; l < num_labels; ++l) {
    items.push_back({l, true});
    if (allow_negative) items.push_back({l, false});
  }
  return items;
}

// Running maximum under the shared tie rule.
struct BestTracker {
  bool has_value = false;
  Head head;
  Rational h;

  void offer(const Head& candidate, const Rational& score) {
    if (!has_value || score > h || (score == h && head_precedes(candidate, head))) {
      has_value = true;
      head = candidate;
      h = score;
    }
  }
};

SearchOutcome finish(BestTracker best, SearchOutcome out) {
  out.best_head = std::move(best.head);
  out.best_h = best.h;
  return out;
}

}  // namespace

SearchStrategy parse_strategy(std::string_view name) {
  if (name == "auto") return SearchStrategy::automatic;
  if (name == "exhaustive") return SearchStrategy::exhaustive;
  if (name == "pruned") return SearchStrategy::pruned_bfs;
  if (name == "decomposable") return SearchStrategy::decomposable;
  throw std::invalid_argument("unknown search strategy '" + std::string(name) + "'");
}

std::string_view strategy_name(SearchStrategy s) {
  switch (s) {
    case SearchStrategy::automatic: return "auto";
    case SearchStrategy::exhaustive: return "exhaustive";
    case SearchStrategy::pruned_bfs: return "pruned";
    case SearchStrategy::decomposable: return "decomposable";
  }
  return {};
}

HeadScorer::HeadScorer(const SearchProblem& problem, const Metric& metric)
    : metric_(metric),
      num_labels_(problem.data->num_labels()),
      universe_size_(problem.universe.count()),
      confusion_(2 * num_labels_),
      correct_(2 * num_labels_) {
  const ExampleMask& covered = problem.coverage;
  const ExampleMask uncovered = problem.universe - covered;
  const std::uint64_t num_covered = covered.count();
  const std::uint64_t num_uncovered = uncovered.count();

  for (std::size_t l = 0; l < num_labels_; ++l) {
    const ExampleMask& present = problem.data->label_column(l);
    const ExampleMask covered_present = covered & present;
    const std::uint64_t hits = covered_present.count();
    const std::uint64_t missed = (uncovered & present).count();
    const std::uint64_t untouched = num_uncovered - missed;

    confusion_[slot({l, true})] = {hits, num_covered - hits, untouched, missed};
    confusion_[slot({l, false})] = {num_covered - hits, hits, untouched, missed};

    // An uncovered example is handled correctly only when the label is absent.
    correct_[slot({l, true})] = covered_present | (uncovered - present);
    correct_[slot({l, false})] = problem.universe - present;
  }
}

Rational HeadScorer::score(const ConfusionMatrix& c, const ExampleMask& correct) const {
  if (metric_.kind() != MetricKind::subset_accuracy) return score_micro(metric_, c);
  if (universe_size_ == 0) throw std::invalid_argument("subset accuracy over zero examples");
  return Rational(static_cast<std::int64_t>(correct.count()), static_cast<std::int64_t>(universe_size_));
}

Rational HeadScorer::score(const Head& head) const {
  if (head.empty()) throw std::invalid_argument("cannot score an empty head");
  ConfusionMatrix c;
  ExampleMask correct = item_correct(head[0]);
  for (const auto& a : head) {
    c += item_confusion(a);
    correct &= item_correct(a);
  }
  return score(c, correct);
}

SearchOutcome best_head_exhaustive(const SearchProblem& problem, const Metric& metric, const SearchConfig& cfg) {
  const Dataset& d = *problem.data;
  const std::size_t n = d.num_labels();
  const std::size_t limit = cfg.allow_negative ? kMaxExhaustiveNegative : kMaxExhaustivePositive;
  if (n > limit)
    throw SearchLimitError("exhaustive head search supports at most " + std::to_string(limit) + " labels, got " +
                           std::to_string(n));

  // Odometer over per-label states: 0 = not in head, 1 = predicts 1, 2 = predicts 0.
  const std::uint8_t states = cfg.allow_negative ? 3 : 2;
  std::vector<std::uint8_t> digits(n, 0);
  BestTracker best;
  SearchOutcome out;
  while (true) {
    std::size_t k = 0;
    while (k < n && digits[k] == states - 1) digits[k++] = 0;
    if (k == n) break;
    ++digits[k];

    std::vector<LabelAssignment> items;
    for (std::size_t l = 0; l < n; ++l)
      if (digits[l] != 0) items.push_back({l, digits[l] == 1});
    if (cfg.max_head_size != 0 && items.size() > cfg.max_head_size) continue;

    Head head(std::move(items));
    const Rational h = evaluate_head(head, problem.coverage, d, problem.universe, metric);
    ++out.evaluated_count;
    best.offer(head, h);
  }
  return finish(std::move(best), std::move(out));
}

SearchOutcome best_head_decomposable(const SearchProblem& problem, const Metric& metric, const SearchConfig& cfg) {
  if (!metric.is_decomposable())
    throw IncompatibleStrategyError("metric '" + metric.name() + "' is not decomposable");
  const HeadScorer scorer(problem, metric);
  const auto items = head_items(scorer.num_labels(), cfg.allow_negative);

  SearchOutcome out;
  std::vector<Rational> scores;
  scores.reserve(items.size());
  for (const auto& item : items) scores.push_back(scorer.score(scorer.item_confusion(item), scorer.item_correct(item)));
  out.evaluated_count = items.size();
  const Rational h_max = *std::max_element(scores.begin(), scores.end());

  // Merge every maximizer; the positive assignment wins when both values of a label tie.
  std::vector<LabelAssignment> merged;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (scores[k] != h_max) continue;
    if (!merged.empty() && merged.back().label == items[k].label) continue;
    merged.push_back(items[k]);
    if (cfg.max_head_size != 0 && merged.size() == cfg.max_head_size) break;
  }
  out.best_head = Head(std::move(merged));
  out.best_h = h_max;
  return out;
}

SearchOutcome best_head_pruned_bfs(const SearchProblem& problem, const Metric& metric, const SearchConfig& cfg) {
  struct Node {
    Head head;
    Rational h;
    ConfusionMatrix confusion;
    ExampleMask correct;
  };

  const HeadScorer scorer(problem, metric);
  const std::size_t n = scorer.num_labels();
  const auto items = head_items(n, cfg.allow_negative);

  BestTracker best;
  SearchOutcome out;
  std::vector<Node> level;
  for (const auto& item : items) {
    Node node{Head({item}), {}, scorer.item_confusion(item), scorer.item_correct(item)};
    node.h = scorer.score(node.confusion, node.correct);
    ++out.evaluated_count;
    best.offer(node.head, node.h);
    level.push_back(std::move(node));
  }

  // Heads whose score fell below their parent's; no superset can be optimal.
  std::vector<Head> decreasing;
  const auto vetoed = [&](const Head& child) {
    return std::any_of(decreasing.begin(), decreasing.end(),
                       [&](const Head& dec) { return dec.size() < child.size() && dec.is_subset_of(child); });
  };
  const auto record_pruned = [&](const Head& head) {
    ++out.pruned_count;
    if (cfg.keep_pruned_heads) out.pruned_heads.push_back(head);
  };

  for (std::size_t size = 1; !level.empty() && (cfg.max_head_size == 0 || size < cfg.max_head_size); ++size) {
    std::vector<Node> next;
    for (const Node& parent : level) {
      const std::size_t first_label = parent.head[parent.head.size() - 1].label + 1;
      for (const auto& item : items) {
        if (item.label < first_label) continue;
        Head child = parent.head.extended(item);
        if (cfg.subset_veto && vetoed(child)) {
          record_pruned(child);
          continue;
        }
        Node node{std::move(child), {}, parent.confusion + scorer.item_confusion(item),
                  parent.correct & scorer.item_correct(item)};
        node.h = scorer.score(node.confusion, node.correct);
        ++out.evaluated_count;
        best.offer(node.head, node.h);
        if (node.h < parent.h) {
          record_pruned(node.head);
          decreasing.push_back(node.head);
        } else {
          next.push_back(std::move(node));
        }
      }
    }
    level = std::move(next);
  }
  return finish(std::move(best), std::move(out));
}

SearchOutcome find_best_head(const SearchProblem& problem, const Metric& metric, const SearchConfig& cfg) {
  switch (cfg.strategy) {
    case SearchStrategy::automatic:
      return metric.is_decomposable() ? best_head_decomposable(problem, metric, cfg)
                                      : best_head_pruned_bfs(problem, metric, cfg);
    case SearchStrategy::exhaustive: return best_head_exhaustive(problem, metric, cfg);
    case SearchStrategy::pruned_bfs: return best_head_pruned_bfs(problem, metric, cfg);
    case SearchStrategy::decomposable: return best_head_decomposable(problem, metric, cfg);
  }
  throw std::invalid_argument("unknown search strategy");
}

}  // namespace mlrules
