#include "mlrules/rule.hpp"

#include <algorithm>

namespace mlrules {

bool covers(std::span<const Condition> body, std::span<const double> x) {
  return std::all_of(body.begin(), body.end(), [&](const Condition& c) { return c.holds(x[c.attribute]); });
}

ExampleMask coverage(std::span<const Condition> body, const Dataset& d, const ExampleMask& within) {
  ExampleMask out(d.num_examples());
  for (auto j = within.find_first(); j != ExampleMask::npos; j = within.find_next(j))
    if (covers(body, d.features(j))) out.set(j);
  return out;
}

ExampleMask coverage(std::span<const Condition> body, const Dataset& d) {
  return coverage(body, d, d.all_examples());
}

std::string render_condition(const Condition& c, const std::vector<AttributeSchema>& attributes) {
  const auto& attr = attributes.at(c.attribute);
  switch (c.test) {
    case Condition::Test::equals: return attr.name + "=" + attr.categories.at(static_cast<std::size_t>(c.value));
    case Condition::Test::leq: return attr.name + "<=" + format_double(c.value);
    case Condition::Test::gt: return attr.name + ">" + format_double(c.value);
  }
  return {};
}

Rational evaluate_rule(const Rule& rule, const Dataset& d, const Metric& metric) {
  return evaluate_rule(rule, d, metric, d.all_examples());
}

Rational evaluate_rule(const Rule& rule, const Dataset& d, const Metric& metric, const ExampleMask& universe) {
  return evaluate_head(rule.head, coverage(rule.body, d, universe), d, universe, metric);
}

}  // namespace mlrules
