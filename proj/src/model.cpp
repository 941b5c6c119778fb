#include "mlrules/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace mlrules {
namespace {

// ---------------------------------------------------------------- model text

constexpr std::string_view kMagic = "mlrules-model";

bool needs_quotes(std::string_view s) {
  if (s.empty()) return true;
  return std::any_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || std::string_view(",=<>;'\\").find(c) != std::string_view::npos;
  });
}

std::string quote(std::string_view s) {
  if (!needs_quotes(s)) return std::string(s);
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Position of the first unquoted occurrence of `needle`, or npos.
std::size_t find_unquoted(std::string_view s, std::string_view needle, std::size_t from = 0) {
  bool quoted = false;
  for (std::size_t i = from; i < s.size(); ++i) {
    if (quoted) {
      if (s[i] == '\\') ++i;
      else if (s[i] == '\'') quoted = false;
    } else if (s[i] == '\'') {
      quoted = true;
    } else if (s.substr(i, needle.size()) == needle) {
      return i;
    }
  }
  return std::string_view::npos;
}

std::vector<std::string_view> split_unquoted(std::string_view s, std::string_view sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (auto pos = find_unquoted(s, sep); pos != std::string_view::npos; pos = find_unquoted(s, sep, start)) {
    parts.push_back(s.substr(start, pos - start));
    start = pos + sep.size();
  }
  parts.push_back(s.substr(start));
  return parts;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.empty() || s.front() != '\'') return std::string(s);
  if (s.size() < 2 || s.back() != '\'') throw ModelFormatError("unterminated quoted name");
  std::string out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == '\\' && i + 2 < s.size()) ++i;
    out.push_back(s[i]);
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s, std::string_view what) {
  s = trim(s);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ModelFormatError("bad " + std::string(what) + " '" + std::string(s) + "'");
  return value;
}

std::size_t attribute_index(const std::vector<AttributeSchema>& attributes, const std::string& name) {
  for (std::size_t a = 0; a < attributes.size(); ++a)
    if (attributes[a].name == name) return a;
  throw SchemaMismatchError("model refers to unknown attribute '" + name + "'");
}

Condition parse_condition(std::string_view text, const std::vector<AttributeSchema>& attributes) {
  text = trim(text);
  const std::size_t leq = find_unquoted(text, "<=");
  const std::size_t gt = find_unquoted(text, ">");
  const std::size_t eq = find_unquoted(text, "=");
  const std::size_t op = std::min({leq, gt, eq});
  if (op == std::string_view::npos) throw ModelFormatError("condition without operator: '" + std::string(text) + "'");

  const std::size_t a = attribute_index(attributes, unquote(text.substr(0, op)));
  const auto& attr = attributes[a];
  if (op == leq || op == gt) {
    if (attr.is_nominal()) throw SchemaMismatchError("threshold test on nominal attribute '" + attr.name + "'");
    const std::size_t width = op == leq ? 2 : 1;
    const double threshold = parse_number<double>(text.substr(op + width), "threshold");
    return op == leq ? Condition::leq(a, threshold) : Condition::gt(a, threshold);
  }
  if (!attr.is_nominal()) throw SchemaMismatchError("equality test on numeric attribute '" + attr.name + "'");
  const std::string category = unquote(text.substr(op + 1));
  const auto idx = attr.category_index(category);
  if (!idx) throw SchemaMismatchError("attribute '" + attr.name + "' has no category '" + category + "'");
  return Condition::equals(a, *idx);
}

Rule parse_rule(std::string_view line, const RuleList& model) {
  Rule rule;
  const std::size_t semi = find_unquoted(line, ";");
  const std::string_view main = line.substr(0, semi);
  const std::size_t arrow = find_unquoted(main, "<-");
  if (arrow == std::string_view::npos) throw ModelFormatError("rule without '<-': '" + std::string(line) + "'");

  std::vector<LabelAssignment> items;
  for (const auto part : split_unquoted(main.substr(0, arrow), ",")) {
    const std::string_view item = trim(part);
    const std::size_t eq = find_unquoted(item, "=");
    if (eq == std::string_view::npos) throw ModelFormatError("head item without '=': '" + std::string(item) + "'");
    const std::string name = unquote(item.substr(0, eq));
    const auto it = std::find(model.label_names.begin(), model.label_names.end(), name);
    if (it == model.label_names.end()) throw ModelFormatError("head refers to unknown label '" + name + "'");
    const std::string_view bit = trim(item.substr(eq + 1));
    if (bit != "0" && bit != "1") throw ModelFormatError("head value must be 0 or 1, got '" + std::string(bit) + "'");
    items.push_back({static_cast<std::size_t>(it - model.label_names.begin()), bit == "1"});
  }
  try {
    rule.head = Head(std::move(items));
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(e.what());
  }
  if (rule.head.empty()) throw ModelFormatError("rule with an empty head");

  rule.body = parse_body(main.substr(arrow + 2), model.attributes);

  if (semi != std::string_view::npos) {
    std::istringstream stats{std::string(line.substr(semi + 1))};
    std::string field;
    while (stats >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw ModelFormatError("bad rule statistic '" + field + "'");
      const std::string key = field.substr(0, eq);
      const std::string_view value = std::string_view(field).substr(eq + 1);
      if (key == "h") {
        try {
          rule.train_h = Rational::parse(value);
        } catch (const std::exception&) {
          throw ModelFormatError("bad rule score '" + std::string(value) + "'");
        }
      } else if (key == "tp") rule.train_confusion.tp = parse_number<std::uint64_t>(value, "tp");
      else if (key == "fp") rule.train_confusion.fp = parse_number<std::uint64_t>(value, "fp");
      else if (key == "tn") rule.train_confusion.tn = parse_number<std::uint64_t>(value, "tn");
      else if (key == "fn") rule.train_confusion.fn = parse_number<std::uint64_t>(value, "fn");
      else throw ModelFormatError("unknown rule statistic '" + key + "'");
    }
  }
  return rule;
}

std::string render_condition_quoted(const Condition& c, const std::vector<AttributeSchema>& attributes) {
  const auto& attr = attributes.at(c.attribute);
  switch (c.test) {
    case Condition::Test::equals:
      return quote(attr.name) + "=" + quote(attr.categories.at(static_cast<std::size_t>(c.value)));
    case Condition::Test::leq: return quote(attr.name) + "<=" + format_double(c.value);
    case Condition::Test::gt: return quote(attr.name) + ">" + format_double(c.value);
  }
  return {};
}

// ---------------------------------------------------------------- evaluation

// Zero denominators: a perfect (empty) label set scores 1, anything else 0.
Rational report_ratio(std::uint64_t num, std::uint64_t den, bool perfect) {
  if (den == 0) return Rational(perfect ? 1 : 0);
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

Rational f1_of(const ConfusionMatrix& c) {
  const bool perfect = c.tp + c.fp + c.fn == 0;
  return report_ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn, perfect);
}

std::string fixed4(const Rational& r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", r.to_double());
  return buf;
}

}  // namespace

RuleList learn_model(const Dataset& d, const ModelConfig& cfg) {
  RuleList model;
  model.label_names = d.label_names();
  model.attributes = d.attributes();
  model.metric = cfg.induction.metric;

  const std::size_t m = d.num_examples();
  const std::size_t n = d.num_labels();
  if (m == 0) return model;

  ExampleMask active = d.all_examples();
  std::vector<ExampleMask> predicted(n, ExampleMask(m));

  while (active.any() && model.rules.size() < cfg.max_rules) {
    std::optional<Rule> rule = learn_rule(d, active, cfg.induction);
    if (!rule) break;

    const ExampleMask covered = coverage(rule->body, d, active);
    for (const auto& a : rule->head) predicted[a.label] |= covered;

    bool removed_any = false;
    for (auto j = covered.find_first(); j != ExampleMask::npos; j = covered.find_next(j)) {
      std::int64_t count = 0;
      for (const auto& column : predicted) count += column.test(j) ? 1 : 0;
      if (Rational(count, static_cast<std::int64_t>(n)) >= cfg.tau) {
        active.reset(j);
        removed_any = true;
      }
    }
    model.rules.push_back(std::move(*rule));
    if (!removed_any) break;
  }
  return model;
}

std::vector<std::uint8_t> predict(const RuleList& model, std::span<const double> x) {
  if (x.size() != model.attributes.size())
    throw SchemaMismatchError("instance has " + std::to_string(x.size()) + " features, model expects " +
                              std::to_string(model.attributes.size()));
  std::vector<std::uint8_t> out(model.num_labels(), 0);
  std::vector<bool> set(model.num_labels(), false);
  for (const auto& rule : model.rules) {
    if (!covers(rule.body, x)) continue;
    for (const auto& a : rule.head) {
      if (set[a.label]) continue;
      set[a.label] = true;
      out[a.label] = a.value ? 1 : 0;
    }
  }
  return out;
}

void check_schema(const RuleList& model, const Dataset& d) {
  if (model.label_names != d.label_names()) throw SchemaMismatchError("dataset labels differ from the model's labels");
  if (model.attributes.size() != d.num_attributes())
    throw SchemaMismatchError("dataset has " + std::to_string(d.num_attributes()) + " features, model expects " +
                              std::to_string(model.attributes.size()));
  for (std::size_t a = 0; a < d.num_attributes(); ++a) {
    const auto& mine = model.attributes[a];
    const auto& theirs = d.attributes()[a];
    if (mine.name != theirs.name || mine.kind != theirs.kind)
      throw SchemaMismatchError("attribute " + std::to_string(a) + " is '" + theirs.name + "', model expects '" +
                                mine.name + "'");
    if (mine.is_nominal() && mine.categories != theirs.categories)
      throw SchemaMismatchError("categories of '" + mine.name + "' differ from the model's");
  }
}

EvaluationReport evaluate_model(const RuleList& model, const Dataset& d) {
  if (d.num_examples() == 0) throw DatasetError("cannot evaluate on an empty dataset");
  check_schema(model, d);

  const std::size_t n = d.num_labels();
  EvaluationReport r;
  r.label_names = d.label_names();
  r.per_label.assign(n, ConfusionMatrix{});
  std::int64_t exact = 0;
  for (std::size_t j = 0; j < d.num_examples(); ++j) {
    const auto y_hat = predict(model, d.features(j));
    bool all_correct = true;
    for (std::size_t i = 0; i < n; ++i) {
      const bool truth = d.label(j, i);
      const bool pred = y_hat[i] != 0;
      auto& c = r.per_label[i];
      if (pred && truth) ++c.tp;
      else if (pred) ++c.fp;
      else if (truth) ++c.fn;
      else ++c.tn;
      all_correct = all_correct && pred == truth;
    }
    exact += all_correct ? 1 : 0;
  }

  ConfusionMatrix sum;
  Rational f1_total;
  for (const auto& c : r.per_label) {
    sum += c;
    f1_total += f1_of(c);
  }
  const bool perfect = sum.tp + sum.fp + sum.fn == 0;
  r.micro_precision = report_ratio(sum.tp, sum.tp + sum.fp, perfect);
  r.micro_recall = report_ratio(sum.tp, sum.tp + sum.fn, perfect);
  r.micro_f1 = f1_of(sum);
  r.macro_f1 = f1_total / static_cast<std::int64_t>(n);
  r.hamming_accuracy = Rational(static_cast<std::int64_t>(sum.tp + sum.tn), static_cast<std::int64_t>(sum.total()));
  r.subset_accuracy = Rational(exact, static_cast<std::int64_t>(d.num_examples()));

  r.rule_count = model.rules.size();
  std::int64_t head_total = 0;
  std::int64_t body_total = 0;
  for (const auto& rule : model.rules) {
    head_total += static_cast<std::int64_t>(rule.head.size());
    body_total += static_cast<std::int64_t>(rule.body.size());
  }
  if (r.rule_count > 0) {
    r.avg_head_size = Rational(head_total, static_cast<std::int64_t>(r.rule_count));
    r.avg_body_length = Rational(body_total, static_cast<std::int64_t>(r.rule_count));
  }
  return r;
}

std::string serialize_model(const RuleList& model) {
  std::ostringstream out;
  out << kMagic << ' ' << kModelFormatVersion << " metric=" << model.metric.name() << " n=" << model.num_labels()
      << " labels=";
  for (std::size_t i = 0; i < model.label_names.size(); ++i) out << (i ? "," : "") << quote(model.label_names[i]);
  out << '\n';
  for (const auto& rule : model.rules) {
    for (std::size_t k = 0; k < rule.head.size(); ++k)
      out << (k ? ", " : "") << quote(model.label_names.at(rule.head[k].label)) << '=' << (rule.head[k].value ? 1 : 0);
    out << " <-";
    for (std::size_t k = 0; k < rule.body.size(); ++k)
      out << (k ? ", " : " ") << render_condition_quoted(rule.body[k], model.attributes);
    const auto& c = rule.train_confusion;
    out << " ; h=" << rule.train_h << " tp=" << c.tp << " fp=" << c.fp << " tn=" << c.tn << " fn=" << c.fn << '\n';
  }
  return out.str();
}

RuleList parse_model(std::string_view text, const std::vector<AttributeSchema>& attributes) {
  RuleList model;
  model.attributes = attributes;

  std::istringstream in{std::string(text)};
  std::string header;
  if (!std::getline(in, header)) throw ModelFormatError("empty model file");
  std::istringstream fields(header);
  std::string magic;
  std::string version;
  fields >> magic >> version;
  if (magic != kMagic) throw ModelFormatError("not a model file");
  if (version != std::to_string(kModelFormatVersion))
    throw ModelFormatError("unsupported model format version '" + version + "'");

  std::optional<std::size_t> n;
  bool have_labels = false;
  std::string rest;
  std::getline(fields, rest);
  // Labels come last on the header line and may contain quoted spaces.
  const std::size_t labels_at = find_unquoted(rest, "labels=");
  if (labels_at != std::string_view::npos) {
    for (const auto part : split_unquoted(std::string_view(rest).substr(labels_at + 7), ","))
      model.label_names.push_back(unquote(part));
    have_labels = true;
    rest.resize(labels_at);
  }
  std::istringstream kv(rest);
  std::string field;
  while (kv >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ModelFormatError("bad header field '" + field + "'");
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "metric") {
      try {
        model.metric = Metric::parse(value);
      } catch (const std::exception& e) {
        throw ModelFormatError(e.what());
      }
    } else if (key == "n") {
      n = parse_number<std::size_t>(value, "label count");
    } else {
      throw ModelFormatError("unknown header field '" + key + "'");
    }
  }
  if (!have_labels || !n) throw ModelFormatError("model header lacks n or labels");
  if (*n != model.label_names.size()) throw ModelFormatError("header label count does not match its label list");

  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    model.rules.push_back(parse_rule(line, model));
  }
  return model;
}

Body parse_body(std::string_view text, const std::vector<AttributeSchema>& attributes) {
  Body body;
  if (trim(text).empty()) return body;
  for (const auto part : split_unquoted(text, ",")) body.push_back(parse_condition(part, attributes));
  return body;
}

std::string render_rule(const Rule& rule, const RuleList& model) {
  std::string out;
  for (std::size_t k = 0; k < rule.head.size(); ++k) {
    if (k) out += ", ";
    if (!rule.head[k].value) out += "¬";
    out += model.label_names.at(rule.head[k].label);
  }
  out += " ←";
  for (std::size_t k = 0; k < rule.body.size(); ++k) {
    out += k ? ", " : " ";
    out += render_condition(rule.body[k], model.attributes);
  }
  return out;
}

std::string render_report(const EvaluationReport& report) {
  std::ostringstream out;
  out << "micro_precision " << fixed4(report.micro_precision) << '\n'
      << "micro_recall " << fixed4(report.micro_recall) << '\n'
      << "micro_f1 " << fixed4(report.micro_f1) << '\n'
      << "macro_f1 " << fixed4(report.macro_f1) << '\n'
      << "hamming_accuracy " << fixed4(report.hamming_accuracy) << '\n'
      << "subset_accuracy " << fixed4(report.subset_accuracy) << '\n'
      << "rules " << report.rule_count << '\n'
      << "avg_head_size " << fixed4(report.avg_head_size) << '\n'
      << "avg_body_length " << fixed4(report.avg_body_length) << '\n';
  for (std::size_t i = 0; i < report.per_label.size(); ++i) {
    const auto& c = report.per_label[i];
    out << "label " << quote(report.label_names.at(i)) << " tp=" << c.tp << " fp=" << c.fp << " tn=" << c.tn
        << " fn=" << c.fn << '\n';
  }
  return out.str();
}

}  // namespace mlrules
