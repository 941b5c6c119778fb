#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace mlrules {

/// One bit per example; used for coverage, active sets and label columns.
using ExampleMask = boost::dynamic_bitset<std::uint64_t>;

/// Feature cells are doubles. Nominal cells hold the category index,
/// missing cells hold a quiet NaN.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Raised when a dataset or label designation violates its contract
/// (non-binary label column, unknown label name, ...).
class DatasetError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AttributeSchema {
  enum class Kind { numeric, nominal };

  std::string name;
  Kind kind = Kind::numeric;
  std::vector<std::string> categories;  // nominal only, declaration order

  static AttributeSchema numeric(std::string name) { return {std::move(name), Kind::numeric, {}}; }
  static AttributeSchema nominal(std::string name, std::vector<std::string> categories) {
    return {std::move(name), Kind::nominal, std::move(categories)};
  }

  bool is_nominal() const { return kind == Kind::nominal; }
  std::optional<std::size_t> category_index(std::string_view category) const;

  friend bool operator==(const AttributeSchema&, const AttributeSchema&) = default;
};

/// Schema plus cells as read from an ARFF file, before any column is
/// designated as a label.
struct RawRelation {
  std::string name;
  std::vector<AttributeSchema> attributes;
  std::vector<std::vector<double>> rows;

  std::optional<std::size_t> attribute_index(std::string_view attribute) const;
};

/// Immutable multi-label training table: feature rows bound to binary label vectors.
class Dataset {
 public:
  Dataset() = default;
  /// Validates shapes and nominal ranges; throws DatasetError.
  Dataset(std::string relation, std::vector<AttributeSchema> attributes, std::vector<std::string> label_names,
          std::vector<std::vector<double>> features, std::vector<std::vector<std::uint8_t>> labels);

  const std::string& relation() const { return relation_; }
  const std::vector<AttributeSchema>& attributes() const { return attributes_; }
  const std::vector<std::string>& label_names() const { return label_names_; }

  std::size_t num_examples() const { return num_examples_; }
  std::size_t num_labels() const { return label_names_.size(); }
  std::size_t num_attributes() const { return attributes_.size(); }

  std::span<const double> features(std::size_t example) const {
    return {features_.data() + example * attributes_.size(), attributes_.size()};
  }
  double feature(std::size_t example, std::size_t attribute) const {
    return features_[example * attributes_.size() + attribute];
  }
  bool label(std::size_t example, std::size_t label) const { return label_columns_[label].test(example); }
  /// Examples where the label is present.
  const ExampleMask& label_column(std::size_t label) const { return label_columns_[label]; }
  std::vector<std::uint8_t> label_vector(std::size_t example) const;

  ExampleMask all_examples() const { return ExampleMask(num_examples_).set(); }

  /// Cell-wise equality; missing cells compare equal to each other.
  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  std::string relation_;
  std::vector<AttributeSchema> attributes_;
  std::vector<std::string> label_names_;
  std::size_t num_examples_ = 0;
  std::vector<double> features_;  // row-major, num_examples_ x attributes_.size()
  std::vector<ExampleMask> label_columns_;
};

/// Which attributes of a raw relation are labels.
struct LabelSpec {
  struct XmlNames {
    std::vector<std::string> names;
  };
  struct LastK {
    std::size_t k;
  };
  struct FirstK {
    std::size_t k;
  };
  std::variant<XmlNames, LastK, FirstK> mode;

  /// "last:<k>", "first:<k>" or "xml:<path>" (the XML file is read here).
  static LabelSpec parse(std::string_view text);
};

struct DatasetStats {
  std::size_t num_examples;
  std::size_t num_labels;
  double cardinality;
  double density;
};

RawRelation parse_arff(std::istream& in);
RawRelation parse_arff(std::string_view text);
RawRelation read_arff_file(const std::string& path);

/// Label names from a Mulan-style labels.xml document, in document order.
std::vector<std::string> parse_label_xml(std::istream& in);
std::vector<std::string> parse_label_xml(std::string_view text);

Dataset bind_labels(const RawRelation& raw, const LabelSpec& spec);
DatasetStats dataset_stats(const Dataset& d);

/// Dense ARFF with features first and labels last as {0,1} attributes.
std::string write_arff(const Dataset& d);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Loads ARFF and label designation in one step; the CLI entry point.
Dataset load_dataset(const std::string& arff_path, const LabelSpec& spec);

}  // namespace mlrules
