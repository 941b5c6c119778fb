#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "mlrules/dataset.hpp"

namespace mlrules {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Maps each category of a label attribute to its bit, or fails for
// attributes that are not one of the accepted binary encodings.
std::optional<std::vector<std::uint8_t>> binary_encoding(const AttributeSchema& attr) {
  if (!attr.is_nominal() || attr.categories.size() != 2) return std::nullopt;
  static constexpr std::pair<std::string_view, std::string_view> kPairs[] = {
      {"0", "1"}, {"false", "true"}, {"no", "yes"}};
  const std::string a = lower(attr.categories[0]);
  const std::string b = lower(attr.categories[1]);
  for (const auto& [off, on] : kPairs) {
    if (a == off && b == on) return std::vector<std::uint8_t>{0, 1};
    if (a == on && b == off) return std::vector<std::uint8_t>{1, 0};
  }
  return std::nullopt;
}

void collect_labels(const boost::property_tree::ptree& node, std::vector<std::string>& out) {
  for (const auto& [tag, child] : node) {
    if (tag != "label") continue;
    const auto name = child.get_optional<std::string>("<xmlattr>.name");
    if (!name) throw ParseError("<label> element without a name attribute");
    out.push_back(*name);
    collect_labels(child, out);  // hierarchical label files nest <label> elements
  }
}

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t k = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("bad label count in '" + std::string(what) + "'");
  return k;
}

}  // namespace

Dataset::Dataset(std::string relation, std::vector<AttributeSchema> attributes, std::vector<std::string> label_names,
                 std::vector<std::vector<double>> features, std::vector<std::vector<std::uint8_t>> labels)
    : relation_(std::move(relation)),
      attributes_(std::move(attributes)),
      label_names_(std::move(label_names)),
      num_examples_(features.size()) {
  if (label_names_.empty()) throw DatasetError("a dataset needs at least one label");
  if (labels.size() != num_examples_) throw DatasetError("feature and label row counts differ");

  std::set<std::string> names;
  for (const auto& attr : attributes_) {
    if (!names.insert(attr.name).second) throw DatasetError("duplicate attribute name '" + attr.name + "'");
    if (attr.is_nominal()) {
      if (attr.categories.empty()) throw DatasetError("nominal attribute '" + attr.name + "' has no categories");
      if (std::set<std::string>(attr.categories.begin(), attr.categories.end()).size() != attr.categories.size())
        throw DatasetError("nominal attribute '" + attr.name + "' has duplicate categories");
    }
  }
  for (const auto& name : label_names_)
    if (!names.insert(name).second) throw DatasetError("duplicate label name '" + name + "'");

  features_.reserve(num_examples_ * attributes_.size());
  for (std::size_t j = 0; j < num_examples_; ++j) {
    if (features[j].size() != attributes_.size())
      throw DatasetError("example " + std::to_string(j) + " has the wrong number of features");
    for (std::size_t a = 0; a < attributes_.size(); ++a) {
      const double v = features[j][a];
      if (attributes_[a].is_nominal() && !is_missing(v)) {
        if (v < 0 || v != std::floor(v) || v >= static_cast<double>(attributes_[a].categories.size()))
          throw DatasetError("example " + std::to_string(j) + ": value out of range for '" + attributes_[a].name + "'");
      }
      features_.push_back(v);
    }
  }

  label_columns_.assign(label_names_.size(), ExampleMask(num_examples_));
  for (std::size_t j = 0; j < num_examples_; ++j) {
    if (labels[j].size() != label_names_.size())
      throw DatasetError("example " + std::to_string(j) + " has the wrong number of labels");
    for (std::size_t i = 0; i < label_names_.size(); ++i)
      if (labels[j][i] != 0) label_columns_[i].set(j);
  }
}

std::vector<std::uint8_t> Dataset::label_vector(std::size_t example) const {
  std::vector<std::uint8_t> out(num_labels());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = label(example, i) ? 1 : 0;
  return out;
}

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.relation_ != b.relation_ || a.attributes_ != b.attributes_ || a.label_names_ != b.label_names_ ||
      a.num_examples_ != b.num_examples_ || a.label_columns_ != b.label_columns_)
    return false;
  return std::equal(a.features_.begin(), a.features_.end(), b.features_.begin(), b.features_.end(),
                    [](double x, double y) { return (is_missing(x) && is_missing(y)) || x == y; });
}

LabelSpec LabelSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("label spec must be xml:<path>, last:<k> or first:<k>");
  const std::string_view mode = text.substr(0, colon);
  const std::string_view arg = text.substr(colon + 1);
  if (mode == "last") return {LastK{parse_count(arg, text)}};
  if (mode == "first") return {FirstK{parse_count(arg, text)}};
  if (mode == "xml") {
    std::ifstream in{std::string(arg)};
    if (!in) throw ParseError("cannot open label file '" + std::string(arg) + "'");
    return {XmlNames{parse_label_xml(in)}};
  }
  throw std::invalid_argument("unknown label spec mode '" + std::string(mode) + "'");
}

std::vector<std::string> parse_label_xml(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_xml(in, tree);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw ParseError(std::string("malformed label XML: ") + e.what());
  }
  std::vector<std::string> names;
  for (const auto& [tag, root] : tree) {
    if (tag == "<xmlcomment>" || tag == "<xmldecl>") continue;
    collect_labels(root, names);
  }
  if (names.empty()) throw ParseError("label XML declares no labels");
  std::set<std::string> seen;
  for (const auto& n : names)
    if (!seen.insert(n).second) throw ParseError("duplicate label '" + n + "' in label XML");
  return names;
}

std::vector<std::string> parse_label_xml(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_label_xml(in);
}

Dataset bind_labels(const RawRelation& raw, const LabelSpec& spec) {
  const std::size_t num_attrs = raw.attributes.size();
  std::vector<std::size_t> label_indices;

  if (const auto* xml = std::get_if<LabelSpec::XmlNames>(&spec.mode)) {
    for (const auto& name : xml->names) {
      const auto idx = raw.attribute_index(name);
      if (!idx) throw DatasetError("label '" + name + "' is not an attribute of relation '" + raw.name + "'");
      label_indices.push_back(*idx);
    }
  } else {
    const bool last = std::holds_alternative<LabelSpec::LastK>(spec.mode);
    const std::size_t k = last ? std::get<LabelSpec::LastK>(spec.mode).k : std::get<LabelSpec::FirstK>(spec.mode).k;
    if (k > num_attrs)
      throw DatasetError("label spec asks for " + std::to_string(k) + " labels but the relation has " +
                         std::to_string(num_attrs) + " attributes");
    for (std::size_t i = 0; i < k; ++i) label_indices.push_back(last ? num_attrs - k + i : i);
  }
  if (label_indices.empty()) throw DatasetError("label spec selects no labels");

  std::vector<bool> is_label(num_attrs, false);
  std::vector<std::vector<std::uint8_t>> encodings;
  std::vector<std::string> label_names;
  for (const auto idx : label_indices) {
    const auto& attr = raw.attributes[idx];
    auto enc = binary_encoding(attr);
    if (!enc) throw DatasetError("label attribute '" + attr.name + "' is not binary ({0,1}, {false,true}, {no,yes})");
    encodings.push_back(std::move(*enc));
    label_names.push_back(attr.name);
    is_label[idx] = true;
  }

  std::vector<AttributeSchema> attrs;
  std::vector<std::size_t> feature_indices;
  for (std::size_t a = 0; a < num_attrs; ++a) {
    if (is_label[a]) continue;
    attrs.push_back(raw.attributes[a]);
    feature_indices.push_back(a);
  }

  std::vector<std::vector<double>> features;
  std::vector<std::vector<std::uint8_t>> labels;
  features.reserve(raw.rows.size());
  labels.reserve(raw.rows.size());
  for (std::size_t j = 0; j < raw.rows.size(); ++j) {
    const auto& row = raw.rows[j];
    std::vector<double> f;
    f.reserve(feature_indices.size());
    for (const auto a : feature_indices) f.push_back(row[a]);
    std::vector<std::uint8_t> y;
    y.reserve(label_indices.size());
    for (std::size_t i = 0; i < label_indices.size(); ++i) {
      const double cell = row[label_indices[i]];
      if (is_missing(cell))
        throw DatasetError("example " + std::to_string(j) + " has a missing value for label '" + label_names[i] + "'");
      y.push_back(encodings[i][static_cast<std::size_t>(cell)]);
    }
    features.push_back(std::move(f));
    labels.push_back(std::move(y));
  }
  return Dataset(raw.name, std::move(attrs), std::move(label_names), std::move(features), std::move(labels));
}

DatasetStats dataset_stats(const Dataset& d) {
  if (d.num_examples() == 0) throw DatasetError("statistics of an empty dataset are undefined");
  std::size_t ones = 0;
  for (std::size_t i = 0; i < d.num_labels(); ++i) ones += d.label_column(i).count();
  const double cardinality = static_cast<double>(ones) / static_cast<double>(d.num_examples());
  return {d.num_examples(), d.num_labels(), cardinality, cardinality / static_cast<double>(d.num_labels())};
}

Dataset load_dataset(const std::string& arff_path, const LabelSpec& spec) {
  return bind_labels(read_arff_file(arff_path), spec);
}

}  // namespace mlrules
