#include "mlrules/induction.hpp"

#include <algorithm>
#include <set>

namespace mlrules {
namespace {

bool implied_by(const Body& body, const Condition& c) {
  return std::any_of(body.begin(), body.end(), [&](const Condition& b) {
    if (b.attribute != c.attribute || b.test != c.test) return false;
    switch (c.test) {
      case Condition::Test::equals: return true;
      case Condition::Test::leq: return b.value <= c.value;
      case Condition::Test::gt: return b.value >= c.value;
    }
    return false;
  });
}

}  // namespace

std::vector<Condition> candidate_conditions(const Dataset& d, const ExampleMask& active, const Body& body) {
  const ExampleMask covered = coverage(body, d, active);
  std::vector<Condition> out;
  std::vector<double> values;
  for (std::size_t a = 0; a < d.num_attributes(); ++a) {
    values.clear();
    for (auto j = covered.find_first(); j != ExampleMask::npos; j = covered.find_next(j)) {
      const double v = d.feature(j, a);
      if (!is_missing(v)) values.push_back(v);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    if (d.attributes()[a].is_nominal()) {
      for (const double category : values) {
        const Condition c = Condition::equals(a, static_cast<std::size_t>(category));
        if (!implied_by(body, c)) out.push_back(c);
      }
      continue;
    }
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      const double threshold = values[k] + (values[k + 1] - values[k]) / 2;
      for (const Condition c : {Condition::leq(a, threshold), Condition::gt(a, threshold)})
        if (!implied_by(body, c)) out.push_back(c);
    }
  }
  return out;
}

Body refine(const Body& body, const Condition& c) {
  Body out = body;
  if (c.test != Condition::Test::equals) {
    for (auto& existing : out) {
      if (existing.attribute == c.attribute && existing.test == c.test) {
        existing = c;
        return out;
      }
    }
  }
  out.push_back(c);
  return out;
}

std::optional<Rule> learn_rule(const Dataset& d, const ExampleMask& active, const InductionConfig& cfg,
                               std::vector<RefinementStep>* trace) {
  const std::size_t num_active = active.count();
  if (num_active == 0 || num_active < cfg.min_coverage) return std::nullopt;

  Body body;
  ExampleMask covered = active;
  SearchOutcome current = find_best_head(SearchProblem(d, active, covered), cfg.metric, cfg.search);
  if (trace) trace->push_back({body, covered, current.best_h});

  for (std::size_t steps = 0; !cfg.max_conditions || steps < *cfg.max_conditions; ++steps) {
    std::optional<Condition> best_condition;
    ExampleMask best_coverage;
    SearchOutcome best_outcome;
    for (const Condition& c : candidate_conditions(d, active, body)) {
      const Body single{c};
      ExampleMask candidate_coverage = coverage(single, d, covered);
      if (candidate_coverage.count() < cfg.min_coverage) continue;
      SearchOutcome outcome = find_best_head(SearchProblem(d, active, candidate_coverage), cfg.metric, cfg.search);
      if (!best_condition || outcome.best_h > best_outcome.best_h) {
        best_condition = c;
        best_coverage = std::move(candidate_coverage);
        best_outcome = std::move(outcome);
      }
    }
    if (!best_condition || best_outcome.best_h <= current.best_h) break;

    body = refine(body, *best_condition);
    covered = std::move(best_coverage);
    current = std::move(best_outcome);
    if (trace) trace->push_back({body, covered, current.best_h});
  }

  if (current.best_h == Rational(0)) return std::nullopt;
  Rule rule;
  rule.body = std::move(body);
  rule.head = std::move(current.best_head);
  rule.train_h = current.best_h;
  rule.train_confusion = micro_aggregate(rule_outcome_grid(rule.head, covered, d, active));
  return rule;
}

}  // namespace mlrules
