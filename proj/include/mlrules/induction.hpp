#pragma once

#include <optional>
#include <vector>

#include "mlrules/dataset.hpp"
#include "mlrules/head_search.hpp"
#include "mlrules/metrics.hpp"
#include "mlrules/rule.hpp"

namespace mlrules {

struct InductionConfig {
  Metric metric = Metric::f_measure();
  SearchConfig search;
  std::size_t min_coverage = 1;
  /// Unlimited when empty.
  std::optional<std::size_t> max_conditions;
};

/// One adopted refinement: the body after it, its coverage and score.
struct RefinementStep {
  Body body;
  ExampleMask coverage;
  Rational h;
};

/// Refinements of `body` over the examples of `active` that `body` covers.
///
/// Nominal attributes yield one equality test per category observed there.
/// Numeric attributes yield a `<=` and a `>` test at the midpoint of every pair
/// of adjacent distinct values. Tests already implied by the body are left out.
std::vector<Condition> candidate_conditions(const Dataset& d, const ExampleMask& active, const Body& body);

/// `body` with `c` added. A numeric bound replaces a looser bound of the same
/// direction on the same attribute, so each attribute keeps at most one `<=`
/// and one `>` test.
Body refine(const Body& body, const Condition& c);

/// Grows one rule top-down from the empty body by greedy hill climbing.
/// Each step adopts the candidate whose best head scores highest. It stops
/// when no candidate strictly improves the score. Returns nothing if the final
/// score is 0 or fewer than `min_coverage` examples are active.
std::optional<Rule> learn_rule(const Dataset& d, const ExampleMask& active, const InductionConfig& cfg,
                               std::vector<RefinementStep>* trace = nullptr);

}  // namespace mlrules
