#pragma once

#include <span>
#include <string>
#include <vector>

#include "mlrules/dataset.hpp"
#include "mlrules/head.hpp"
#include "mlrules/metrics.hpp"
#include "mlrules/rational.hpp"

namespace mlrules {

/// Attribute test of a rule body. For nominal attributes `value` is the
/// category index; for numeric attributes it is the threshold.
struct Condition {
  enum class Test { equals, leq, gt };

  std::size_t attribute = 0;
  Test test = Test::equals;
  double value = 0;

  static Condition equals(std::size_t attribute, std::size_t category) {
    return {attribute, Test::equals, static_cast<double>(category)};
  }
  static Condition leq(std::size_t attribute, double threshold) { return {attribute, Test::leq, threshold}; }
  static Condition gt(std::size_t attribute, double threshold) { return {attribute, Test::gt, threshold}; }

  /// A missing cell never satisfies a condition.
  bool holds(double cell) const {
    if (is_missing(cell)) return false;
    switch (test) {
      case Test::equals: return cell == value;
      case Test::leq: return cell <= value;
      case Test::gt: return cell > value;
    }
    return false;
  }

  friend bool operator==(const Condition&, const Condition&) = default;
};

using Body = std::vector<Condition>;

/// True iff every condition holds; the empty body covers everything.
bool covers(std::span<const Condition> body, std::span<const double> x);

/// Examples of `within` covered by `body`.
ExampleMask coverage(std::span<const Condition> body, const Dataset& d, const ExampleMask& within);
ExampleMask coverage(std::span<const Condition> body, const Dataset& d);

/// `attr<=v`, `attr>v` or `attr=cat`, thresholds in round-trip precision.
std::string render_condition(const Condition& c, const std::vector<AttributeSchema>& attributes);

struct Rule {
  Body body;
  Head head;
  Rational train_h;
  ConfusionMatrix train_confusion;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// h(head <- body) over all examples of `d`.
Rational evaluate_rule(const Rule& rule, const Dataset& d, const Metric& metric);
/// Same, with both coverage and metric cells restricted to `universe`.
Rational evaluate_rule(const Rule& rule, const Dataset& d, const Metric& metric, const ExampleMask& universe);

}  // namespace mlrules
