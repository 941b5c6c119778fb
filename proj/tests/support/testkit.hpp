#pragma once

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "mlrules/dataset.hpp"
#include "mlrules/head.hpp"
#include "mlrules/metrics.hpp"
#include "mlrules/rational.hpp"
#include "mlrules/rule.hpp"

namespace mlrules {

// Failure messages in tests.
inline std::ostream& operator<<(std::ostream& out, const Head& h) {
  out << '{';
  for (std::size_t k = 0; k < h.size(); ++k) out << (k ? "," : "") << h[k].label << '=' << int(h[k].value);
  return out << '}';
}

inline std::ostream& operator<<(std::ostream& out, const ConfusionMatrix& c) {
  return out << "(tp=" << c.tp << " fp=" << c.fp << " tn=" << c.tn << " fn=" << c.fn << ')';
}

inline std::ostream& operator<<(std::ostream& out, const Condition& c) {
  const char* op = c.test == Condition::Test::equals ? "=" : c.test == Condition::Test::leq ? "<=" : ">";
  return out << '#' << c.attribute << op << c.value;
}

}  // namespace mlrules

namespace testkit {

using mlrules::Dataset;
using mlrules::ExampleMask;
using mlrules::Head;
using mlrules::Metric;
using mlrules::Rational;

/// Six examples, four labels, one nominal attribute `cov` in {yes, no};
/// the last three examples have cov=yes.
Dataset f1_dataset();
/// Examples 3, 4 and 5 (cov=yes).
ExampleMask f1_covered();

ExampleMask mask_of(std::size_t m, std::initializer_list<std::size_t> members);

/// Labels-only dataset with no attributes.
Dataset label_table(const std::vector<std::vector<std::uint8_t>>& rows);

/// Two nominal groups: a=p examples carry labels {l1, l2}, a=q examples {l3}.
Dataset separable_dataset(std::size_t per_group = 3);

struct RandomInstance {
  Dataset d;
  ExampleMask universe;
  ExampleMask coverage;
};

/// m in [1, max_m], n in [1, max_n], fair-coin labels and coverage; the
/// universe is all examples unless `random_universe` is set.
RandomInstance random_instance(std::mt19937_64& rng, std::size_t max_m, std::size_t max_n,
                               bool random_universe = false);
RandomInstance random_instance_with_n(std::mt19937_64& rng, std::size_t max_m, std::size_t n);

std::vector<Metric> all_metrics();

/// Every non-empty head over `n` labels, optionally with negative assignments.
std::vector<Head> all_heads(std::size_t n, bool allow_negative);

/// Brute-force score computed cell by cell from the raw label bits.
Rational oracle_score(const Dataset& d, const ExampleMask& universe, const ExampleMask& coverage, const Head& head,
                      const Metric& metric);

/// Maximum of oracle_score over all_heads().
Rational oracle_best(const Dataset& d, const ExampleMask& universe, const ExampleMask& coverage, const Metric& metric,
                     bool allow_negative);

std::string describe(const RandomInstance& inst);

}  // namespace testkit
