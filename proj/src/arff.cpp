// ARFF reader and writer. Supports the subset Mulan datasets use: numeric and
// nominal attributes, dense and sparse rows, '?' for missing cells.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "mlrules/dataset.hpp"

namespace mlrules {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

bool is_quote(char c) { return c == '\'' || c == '"'; }

// Drops an unquoted '%' and everything after it.
std::string_view strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote != 0) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
    } else if (is_quote(c)) {
      quote = c;
    } else if (c == '%') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string unquote(std::string_view token, std::size_t line_no) {
  token = trim(token);
  if (token.empty() || !is_quote(token.front())) return std::string(token);
  const char q = token.front();
  if (token.size() < 2 || token.back() != q) throw ParseError("unterminated quoted string", line_no);
  std::string out;
  for (std::size_t i = 1; i + 1 < token.size(); ++i) {
    if (token[i] == '\\' && i + 2 < token.size()) ++i;
    out.push_back(token[i]);
  }
  return out;
}

// Splits on `sep` outside quotes. Tokens keep their quotes.
std::vector<std::string_view> split_unquoted(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quote != 0) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
    } else if (is_quote(c)) {
      quote = c;
    } else if (c == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(s.substr(start));
  return parts;
}

// Reads one whitespace-delimited (or quoted) word from the front of `s`.
std::string next_word(std::string_view& s, std::size_t line_no) {
  s = trim(s);
  if (s.empty()) return {};
  std::size_t end = 0;
  if (is_quote(s.front())) {
    const char q = s.front();
    end = 1;
    while (end < s.size() && s[end] != q) {
      if (s[end] == '\\') ++end;
      ++end;
    }
    if (end >= s.size()) throw ParseError("unterminated quoted string", line_no);
    ++end;
  } else {
    while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end])) && s[end] != '{') ++end;
  }
  std::string word = unquote(s.substr(0, end), line_no);
  s.remove_prefix(end);
  return word;
}

std::optional<double> parse_number(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

AttributeSchema parse_attribute(std::string_view rest, std::size_t line_no) {
  std::string name = next_word(rest, line_no);
  if (name.empty()) throw ParseError("@attribute without a name", line_no);
  rest = trim(rest);
  if (rest.empty()) throw ParseError("@attribute '" + name + "' without a type", line_no);

  if (rest.front() == '{') {
    if (rest.back() != '}') throw ParseError("unterminated nominal list for '" + name + "'", line_no);
    const std::string_view body = trim(rest.substr(1, rest.size() - 2));
    std::vector<std::string> categories;
    std::set<std::string> seen;
    if (!body.empty()) {
      for (const auto part : split_unquoted(body, ',')) {
        std::string category = unquote(part, line_no);
        if (category.empty()) throw ParseError("empty category in nominal list for '" + name + "'", line_no);
        if (!seen.insert(category).second)
          throw ParseError("duplicate category '" + category + "' for '" + name + "'", line_no);
        categories.push_back(std::move(category));
      }
    }
    if (categories.empty()) throw ParseError("nominal attribute '" + name + "' has no categories", line_no);
    return AttributeSchema::nominal(std::move(name), std::move(categories));
  }

  std::string_view type_rest = rest;
  const std::string type = next_word(type_rest, line_no);
  if (!trim(type_rest).empty()) throw ParseError("trailing text after type of '" + name + "'", line_no);
  if (iequals(type, "numeric") || iequals(type, "real") || iequals(type, "integer"))
    return AttributeSchema::numeric(std::move(name));
  throw ParseError("unsupported type '" + type + "' for attribute '" + name + "'", line_no);
}

double parse_cell(std::string_view token, const AttributeSchema& attr, std::size_t line_no) {
  const std::string value = unquote(token, line_no);
  if (value == "?") return kMissing;
  if (attr.is_nominal()) {
    if (const auto idx = attr.category_index(value)) return static_cast<double>(*idx);
    throw ParseError("undeclared value '" + value + "' for nominal attribute '" + attr.name + "'", line_no);
  }
  if (const auto number = parse_number(value)) return *number;
  throw ParseError("'" + value + "' is not a number (attribute '" + attr.name + "')", line_no);
}

std::vector<double> parse_dense_row(std::string_view line, const std::vector<AttributeSchema>& attrs,
                                    std::size_t line_no) {
  const auto tokens = split_unquoted(line, ',');
  if (tokens.size() != attrs.size())
    throw ParseError("row has " + std::to_string(tokens.size()) + " values, expected " + std::to_string(attrs.size()),
                     line_no);
  std::vector<double> row(attrs.size());
  for (std::size_t i = 0; i < attrs.size(); ++i) row[i] = parse_cell(trim(tokens[i]), attrs[i], line_no);
  return row;
}

std::vector<double> parse_sparse_row(std::string_view line, const std::vector<AttributeSchema>& attrs,
                                     std::size_t line_no) {
  if (line.back() != '}') throw ParseError("unterminated sparse row", line_no);
  // Absent entries default to 0 (numeric) or the first category (nominal), i.e. 0 either way.
  std::vector<double> row(attrs.size(), 0.0);
  const std::string_view body = trim(line.substr(1, line.size() - 2));
  if (body.empty()) return row;
  for (const auto entry : split_unquoted(body, ',')) {
    std::string_view rest = trim(entry);
    const auto space = rest.find_first_of(" \t");
    if (space == std::string_view::npos) throw ParseError("sparse entry '" + std::string(rest) + "' lacks a value", line_no);
    std::size_t index = 0;
    const auto idx_text = rest.substr(0, space);
    const auto [ptr, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), index);
    if (ec != std::errc{} || ptr != idx_text.data() + idx_text.size() || index >= attrs.size())
      throw ParseError("bad sparse index '" + std::string(idx_text) + "'", line_no);
    row[index] = parse_cell(trim(rest.substr(space)), attrs[index], line_no);
  }
  return row;
}

bool needs_quotes(std::string_view s) {
  if (s.empty() || s == "?") return true;
  return std::any_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '\'' || c == '"' || c == '{' ||
           c == '}' || c == '%' || c == '\\';
  });
}

std::string quote_if_needed(std::string_view s) {
  if (!needs_quotes(s)) return std::string(s);
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

}  // namespace

std::optional<std::size_t> AttributeSchema::category_index(std::string_view category) const {
  const auto it = std::find(categories.begin(), categories.end(), category);
  if (it == categories.end()) return std::nullopt;
  return static_cast<std::size_t>(it - categories.begin());
}

std::optional<std::size_t> RawRelation::attribute_index(std::string_view attribute) const {
  for (std::size_t i = 0; i < attributes.size(); ++i)
    if (attributes[i].name == attribute) return i;
  return std::nullopt;
}

RawRelation parse_arff(std::istream& in) {
  RawRelation rel;
  std::set<std::string> names;
  bool in_data = false;
  bool seen_relation = false;
  std::string raw_line;
  std::size_t line_no = 0;

  while (std::getline(in, raw_line)) {
    ++line_no;
    const std::string_view line = trim(strip_comment(raw_line));
    if (line.empty()) continue;

    if (in_data) {
      rel.rows.push_back(line.front() == '{' ? parse_sparse_row(line, rel.attributes, line_no)
                                             : parse_dense_row(line, rel.attributes, line_no));
      continue;
    }

    if (line.front() != '@') throw ParseError("expected a declaration, got '" + std::string(line) + "'", line_no);
    std::string_view rest = line.substr(1);
    const auto kw_end = std::min(rest.find_first_of(" \t"), rest.size());
    const std::string_view keyword = rest.substr(0, kw_end);
    rest.remove_prefix(kw_end);

    if (iequals(keyword, "relation")) {
      rel.name = next_word(rest, line_no);
      seen_relation = true;
    } else if (iequals(keyword, "attribute")) {
      AttributeSchema attr = parse_attribute(rest, line_no);
      if (!names.insert(attr.name).second) throw ParseError("duplicate attribute '" + attr.name + "'", line_no);
      rel.attributes.push_back(std::move(attr));
    } else if (iequals(keyword, "data")) {
      if (!trim(rest).empty()) throw ParseError("trailing text after @data", line_no);
      in_data = true;
    } else {
      throw ParseError("unknown declaration '@" + std::string(keyword) + "'", line_no);
    }
  }
  if (!seen_relation) throw ParseError("missing @relation declaration");
  if (!in_data) throw ParseError("missing @data section");
  return rel;
}

RawRelation parse_arff(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_arff(in);
}

RawRelation read_arff_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return parse_arff(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string write_arff(const Dataset& d) {
  std::ostringstream out;
  out << "@relation " << quote_if_needed(d.relation().empty() ? "dataset" : d.relation()) << "\n\n";
  for (const auto& attr : d.attributes()) {
    out << "@attribute " << quote_if_needed(attr.name) << ' ';
    if (attr.is_nominal()) {
      out << '{';
      for (std::size_t c = 0; c < attr.categories.size(); ++c)
        out << (c ? "," : "") << quote_if_needed(attr.categories[c]);
      out << "}\n";
    } else {
      out << "numeric\n";
    }
  }
  for (const auto& name : d.label_names()) out << "@attribute " << quote_if_needed(name) << " {0,1}\n";
  out << "\n@data\n";
  for (std::size_t j = 0; j < d.num_examples(); ++j) {
    const auto row = d.features(j);
    for (std::size_t a = 0; a < row.size(); ++a) {
      if (a) out << ',';
      if (is_missing(row[a])) out << '?';
      else if (d.attributes()[a].is_nominal())
        out << quote_if_needed(d.attributes()[a].categories[static_cast<std::size_t>(row[a])]);
      else out << format_double(row[a]);
    }
    for (std::size_t i = 0; i < d.num_labels(); ++i) out << (row.empty() && i == 0 ? "" : ",") << (d.label(j, i) ? '1' : '0');
    out << '\n';
  }
  return out.str();
}

}  // namespace mlrules
