#include "testkit.hpp"

#include <sstream>

namespace testkit {

using mlrules::AttributeSchema;
using mlrules::LabelAssignment;
using mlrules::MetricKind;

Dataset f1_dataset() {
  const std::vector<std::vector<std::uint8_t>> labels{
      {0, 1, 1, 0}, {1, 1, 1, 1}, {0, 0, 1, 0}, {0, 1, 1, 0}, {1, 1, 0, 0}, {1, 0, 0, 0},
  };
  // category 0 = yes, 1 = no
  std::vector<std::vector<double>> features{{1}, {1}, {1}, {0}, {0}, {0}};
  return Dataset("f1", {AttributeSchema::nominal("cov", {"yes", "no"})}, {"l1", "l2", "l3", "l4"},
                 std::move(features), labels);
}

ExampleMask f1_covered() { return mask_of(6, {3, 4, 5}); }

ExampleMask mask_of(std::size_t m, std::initializer_list<std::size_t> members) {
  ExampleMask mask(m);
  for (const auto j : members) mask.set(j);
  return mask;
}

Dataset label_table(const std::vector<std::vector<std::uint8_t>>& rows) {
  const std::size_t n = rows.empty() ? 1 : rows.front().size();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("l" + std::to_string(i + 1));
  return Dataset("table", {}, std::move(names), std::vector<std::vector<double>>(rows.size()), rows);
}

Dataset separable_dataset(std::size_t per_group) {
  std::vector<std::vector<double>> features;
  std::vector<std::vector<std::uint8_t>> labels;
  for (std::size_t k = 0; k < per_group; ++k) {
    features.push_back({0});
    labels.push_back({1, 1, 0});
    features.push_back({1});
    labels.push_back({0, 0, 1});
  }
  return Dataset("separable", {AttributeSchema::nominal("a", {"p", "q"})}, {"l1", "l2", "l3"}, std::move(features),
                 std::move(labels));
}

RandomInstance random_instance_with_n(std::mt19937_64& rng, std::size_t max_m, std::size_t n) {
  std::uniform_int_distribution<std::size_t> pick_m(1, max_m);
  std::bernoulli_distribution coin(0.5);
  const std::size_t m = pick_m(rng);
  std::vector<std::vector<std::uint8_t>> rows(m, std::vector<std::uint8_t>(n));
  for (auto& row : rows)
    for (auto& bit : row) bit = coin(rng);
  RandomInstance inst{label_table(rows), ExampleMask(m), ExampleMask(m)};
  inst.universe.set();
  for (std::size_t j = 0; j < m; ++j) inst.coverage[j] = coin(rng);
  return inst;
}

RandomInstance random_instance(std::mt19937_64& rng, std::size_t max_m, std::size_t max_n, bool random_universe) {
  std::uniform_int_distribution<std::size_t> pick_n(1, max_n);
  RandomInstance inst = random_instance_with_n(rng, max_m, pick_n(rng));
  if (random_universe) {
    std::bernoulli_distribution coin(0.7);
    for (std::size_t j = 0; j < inst.universe.size(); ++j) inst.universe[j] = coin(rng);
    inst.universe.set(0);  // keep it non-empty
  }
  return inst;
}

std::vector<Metric> all_metrics() {
  return {Metric::precision(), Metric::hamming_accuracy(), Metric::recall(), Metric::f_measure(),
          Metric::f_measure(Rational(1)), Metric::f_measure(Rational(2)), Metric::subset_accuracy()};
}

std::vector<Head> all_heads(std::size_t n, bool allow_negative) {
  // Each label is absent, positive or (optionally) negative.
  const std::size_t base = allow_negative ? 3 : 2;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= base;
  std::vector<Head> heads;
  for (std::size_t code = 1; code < total; ++code) {
    std::vector<LabelAssignment> items;
    std::size_t rest = code;
    for (std::size_t i = 0; i < n; ++i, rest /= base) {
      if (rest % base == 1) items.push_back({i, true});
      if (rest % base == 2) items.push_back({i, false});
    }
    heads.emplace_back(std::move(items));
  }
  return heads;
}

namespace {

Rational frac(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return Rational(0);
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational oracle_score(const Dataset& d, const ExampleMask& universe, const ExampleMask& coverage, const Head& head,
                      const Metric& metric) {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0, rows = 0, perfect = 0;
  for (std::size_t j = 0; j < d.num_examples(); ++j) {
    if (!universe[j]) continue;
    ++rows;
    bool all_right = true;
    for (const auto& a : head) {
      const bool truth = d.label(j, a.label);
      if (coverage[j]) {
        if (truth == a.value) ++tp;
        else {
          ++fp;
          all_right = false;
        }
      } else if (truth) {
        ++fn;
        all_right = false;
      } else {
        ++tn;
      }
    }
    if (all_right) ++perfect;
  }
  const Rational precision = frac(tp, tp + fp);
  const Rational recall = frac(tp, tp + fn);
  switch (metric.kind()) {
    case MetricKind::precision: return precision;
    case MetricKind::recall: return recall;
    case MetricKind::hamming_accuracy: return frac(tp + tn, tp + fp + tn + fn);
    case MetricKind::subset_accuracy: return frac(perfect, rows);
    case MetricKind::f_measure: {
      if (precision == Rational(0) || recall == Rational(0)) return Rational(0);
      const Rational b2 = metric.beta() * metric.beta();
      return (b2 + Rational(1)) / (b2 / recall + Rational(1) / precision);
    }
  }
  return Rational(0);
}

Rational oracle_best(const Dataset& d, const ExampleMask& universe, const ExampleMask& coverage, const Metric& metric,
                     bool allow_negative) {
  Rational best(0);
  for (const auto& head : all_heads(d.num_labels(), allow_negative))
    best = std::max(best, oracle_score(d, universe, coverage, head, metric));
  return best;
}

std::string describe(const RandomInstance& inst) {
  std::ostringstream out;
  out << "m=" << inst.d.num_examples() << " n=" << inst.d.num_labels() << " rows=";
  for (std::size_t j = 0; j < inst.d.num_examples(); ++j) {
    out << (j ? " " : "") << (inst.universe[j] ? "" : "~") << (inst.coverage[j] ? "*" : "");
    for (const auto bit : inst.d.label_vector(j)) out << int(bit);
  }
  return out.str();
}

}  // namespace testkit
