#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace mlrules {

/// Predicted value for one label: `value == true` asserts presence.
struct LabelAssignment {
  std::size_t label = 0;
  bool value = true;

  friend bool operator==(const LabelAssignment&, const LabelAssignment&) = default;
};

/// Canonical item order: ascending label, and for the same label the
/// positive assignment first.
inline bool item_less(const LabelAssignment& a, const LabelAssignment& b) {
  if (a.label != b.label) return a.label < b.label;
  return a.value && !b.value;
}

/// Partial prediction of a rule: at most one assignment per label, kept in
/// ascending label order.
class Head {
 public:
  Head() = default;
  explicit Head(std::vector<LabelAssignment> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end(), item_less);
    for (std::size_t k = 1; k < items_.size(); ++k)
      if (items_[k].label == items_[k - 1].label) throw std::invalid_argument("head assigns a label twice");
  }

  /// Head asserting presence of each listed label.
  static Head positive(std::initializer_list<std::size_t> labels) {
    std::vector<LabelAssignment> items;
    for (const auto l : labels) items.push_back({l, true});
    return Head(std::move(items));
  }

  std::span<const LabelAssignment> assignments() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const LabelAssignment& operator[](std::size_t k) const { return items_[k]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  bool all_positive() const {
    return std::all_of(items_.begin(), items_.end(), [](const auto& a) { return a.value; });
  }

  /// Copy with `item` appended; `item.label` must exceed every label already present.
  Head extended(LabelAssignment item) const {
    if (!items_.empty() && item.label <= items_.back().label)
      throw std::invalid_argument("head extension must use a larger label index");
    Head out = *this;
    out.items_.push_back(item);
    return out;
  }

  /// Item-wise subset test (label and value must both match).
  bool is_subset_of(const Head& other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end(), item_less);
  }

  friend bool operator==(const Head&, const Head&) = default;

 private:
  std::vector<LabelAssignment> items_;
};

/// Tie rule shared by the exhaustive and breadth-first searches: fewer labels
/// first, then lexicographically smaller label indices, then positive before
/// negative assignment, label by label.
inline bool head_precedes(const Head& a, const Head& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k].label != b[k].label) return a[k].label < b[k].label;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k].value != b[k].value) return a[k].value;
  return false;
}

}  // namespace mlrules
