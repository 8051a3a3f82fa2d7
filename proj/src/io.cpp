#include "proofminer/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace proofminer {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto end = text.find(sep, start);
    out.emplace_back(text.substr(start, end == std::string_view::npos ? end : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::vector<std::string> lines_of(std::string_view text) {
  auto lines = split(text, '\n');
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(std::string_view text, std::size_t line) {
  const auto t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error(ErrorCode::Format, "line " + std::to_string(line) + ": bad number '" + t + "'");
  }
  return value;
}

FeatureVector make_vector(std::string name, Level level, std::vector<double> values) {
  FeatureVector v;
  v.lemma_name = std::move(name);
  v.level = level;
  v.values = std::move(values);
  v.saturated = std::any_of(v.values.begin(), v.values.end(),
                            [](double x) { return std::abs(x) >= kEncodingCap; });
  return v;
}

void check_rectangular(const std::vector<FeatureVector>& vectors) {
  for (const auto& v : vectors) {
    if (v.values.size() != vectors.front().values.size()) {
      throw Error(ErrorCode::DimensionMismatch, "vectors have different lengths");
    }
  }
}

std::string escape_field(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    const char c = s[++i];
    out += c == 'n' ? '\n' : c == 't' ? '\t' : c;
  }
  return out;
}

Namespace parse_namespace(std::string_view text) {
  for (auto ns : {Namespace::Tactic, Namespace::Type, Namespace::TopSymbol, Namespace::Lemma}) {
    if (namespace_name(ns) == text) return ns;
  }
  throw Error(ErrorCode::Format, "unknown symbol namespace '" + std::string(text) + "'");
}

constexpr std::array<std::pair<Level, std::string_view>, 3> kLevelFiles{{
    {Level::Goal, "goal.csv"}, {Level::Tactic, "tactic.csv"}, {Level::Tree, "tree.csv"}}};

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

// CSV ------------------------------------------------------------------------

std::string csv_text(const std::vector<FeatureVector>& vectors) {
  check_rectangular(vectors);
  std::string out;
  for (const auto& v : vectors) {
    for (std::size_t j = 0; j < v.values.size(); ++j) {
      if (j) out += ',';
      out += format_number(v.values[j]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<double>> parse_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::vector<double> row;
    for (const auto& field : split(lines[i], ',')) row.push_back(parse_number(field, i + 1));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::Format, "line " + std::to_string(i + 1) + ": expected " +
                                         std::to_string(rows.front().size()) + " columns");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_csv(const std::vector<FeatureVector>& vectors, const fs::path& path) {
  write_file(path, csv_text(vectors));
  std::string names;
  for (const auto& v : vectors) names += v.lemma_name + '\n';
  write_file(fs::path(path.string() + ".names"), names);
}

std::vector<FeatureVector> read_csv(const fs::path& path, Level level) {
  auto rows = parse_csv(read_file(path));
  const auto names = lines_of(read_file(fs::path(path.string() + ".names")));
  if (names.size() != rows.size()) {
    throw Error(ErrorCode::Format, path.string() + ": " + std::to_string(rows.size()) +
                                       " rows but " + std::to_string(names.size()) + " names");
  }
  std::vector<FeatureVector> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.push_back(make_vector(names[i], level, std::move(rows[i])));
  }
  return out;
}

// ARFF -----------------------------------------------------------------------

namespace {

std::string arff_quote(const std::string& s) {
  if (!s.empty() && s.find_first_of(" \t,{}%'\"") == std::string::npos) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

// Reads an optionally quoted token at the start of `s`; returns the rest.
std::string_view arff_token(std::string_view s, std::string& token) {
  token.clear();
  std::size_t i = s.find_first_not_of(" \t");
  if (i == std::string_view::npos) return {};
  if (s[i] == '\'' || s[i] == '"') {
    const char quote = s[i++];
    for (; i < s.size() && s[i] != quote; ++i) {
      if (s[i] == '\\' && i + 1 < s.size()) ++i;
      token += s[i];
    }
    if (i >= s.size()) throw Error(ErrorCode::Format, "unterminated quote in ARFF header");
    return s.substr(i + 1);
  }
  const auto end = s.find_first_of(" \t", i);
  token = std::string(s.substr(i, end == std::string_view::npos ? end : end - i));
  return end == std::string_view::npos ? std::string_view{} : s.substr(end);
}

bool keyword_is(const std::string& line, std::string_view keyword) {
  if (line.size() < keyword.size()) return false;
  for (std::size_t i = 0; i < keyword.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(line[i])) != keyword[i]) return false;
  }
  return line.size() == keyword.size() || line[keyword.size()] == ' ' ||
         line[keyword.size()] == '\t';
}

}  // namespace

std::string arff_text(const std::vector<FeatureVector>& vectors, const std::string& relation) {
  check_rectangular(vectors);
  const std::size_t d = vectors.empty() ? 0 : vectors.front().values.size();
  std::string out = "@RELATION " + arff_quote(relation) + "\n\n";
  for (std::size_t j = 0; j < d; ++j) out += "@ATTRIBUTE f" + std::to_string(j + 1) + " NUMERIC\n";
  out += "\n@DATA\n";
  for (const auto& v : vectors) {
    out += "% lemma " + v.lemma_name + "\n";
    for (std::size_t j = 0; j < d; ++j) {
      if (j) out += ',';
      out += format_number(v.values[j]);
    }
    out += '\n';
  }
  return out;
}

ArffData parse_arff(std::string_view text) {
  ArffData out;
  bool in_data = false;
  bool have_relation = false;
  std::string pending_label;
  bool has_pending = false;
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    const auto where = "line " + std::to_string(i + 1) + ": ";
    if (line.empty()) continue;
    if (line[0] == '%') {
      constexpr std::string_view tag = "% lemma ";
      if (in_data && line.rfind(tag, 0) == 0) {
        pending_label = line.substr(tag.size());
        has_pending = true;
      }
      continue;
    }
    if (!in_data) {
      std::string token;
      if (keyword_is(line, "@RELATION")) {
        arff_token(std::string_view(line).substr(9), out.relation);
        have_relation = true;
      } else if (keyword_is(line, "@ATTRIBUTE")) {
        auto rest = arff_token(std::string_view(line).substr(10), token);
        out.attributes.push_back(token);
        std::string type;
        arff_token(rest, type);
        std::transform(type.begin(), type.end(), type.begin(),
                       [](unsigned char c) { return std::toupper(c); });
        if (type != "NUMERIC" && type != "REAL" && type != "INTEGER") {
          throw Error(ErrorCode::Format, where + "unsupported attribute type '" + type + "'");
        }
      } else if (keyword_is(line, "@DATA")) {
        if (!have_relation) throw Error(ErrorCode::Format, where + "@DATA before @RELATION");
        in_data = true;
      } else {
        throw Error(ErrorCode::Format, where + "unexpected header line");
      }
      continue;
    }
    std::vector<double> row;
    for (const auto& field : split(line, ',')) row.push_back(parse_number(field, i + 1));
    if (row.size() != out.attributes.size()) {
      throw Error(ErrorCode::Format, where + "expected " + std::to_string(out.attributes.size()) +
                                         " values");
    }
    out.rows.push_back(std::move(row));
    out.labels.push_back(has_pending ? pending_label : "row" + std::to_string(out.rows.size()));
    has_pending = false;
  }
  if (!have_relation) throw Error(ErrorCode::Format, "missing @RELATION");
  return out;
}

void write_arff(const std::vector<FeatureVector>& vectors, const std::string& relation,
                const fs::path& path) {
  write_file(path, arff_text(vectors, relation));
}

ArffData read_arff(const fs::path& path) { return parse_arff(read_file(path)); }

std::vector<FeatureVector> arff_vectors(const ArffData& data, Level level) {
  std::vector<FeatureVector> out;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    out.push_back(make_vector(data.labels[i], level, data.rows[i]));
  }
  return out;
}

// Library export ---------------------------------------------------------------

const std::vector<FeatureVector>& Corpus::vectors(Level level) const {
  switch (level) {
    case Level::Goal: return goal;
    case Level::Tactic: return tactic;
    case Level::Tree: return tree;
  }
  return goal;
}

const LemmaInfo* Corpus::find(std::string_view lemma) const {
  for (const auto& info : lemmas) {
    if (info.name == lemma) return &info;
  }
  return nullptr;
}

Corpus build_corpus(const TraceLibrary& library, TacticMode mode) {
  for (const auto& trace : library.traces) {
    if (!trace.complete) {
      throw Error(ErrorCode::IncompleteProof, "proof of '" + trace.lemma_name + "' is not finished");
    }
  }
  const auto universe = TacticUniverse::for_mode(mode);
  Corpus corpus;
  corpus.name = library.name;
  corpus.mode = mode;
  for (const auto& trace : library.traces) {
    corpus.lemmas.push_back({trace.lemma_name, trace.statement, render_script(trace), library.name});
  }
  auto goal = extract_corpus(library.traces, Level::Goal, universe);
  corpus.goal = std::move(goal.vectors);
  corpus.tactic = extract_corpus(library.traces, Level::Tactic, universe).vectors;
  corpus.tree = extract_corpus(library.traces, Level::Tree, universe).vectors;
  corpus.symbols = std::move(goal.symbols);
  return corpus;
}

void write_corpus(const Corpus& corpus, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  std::string lemmas = "library " + corpus.name + "\n";
  lemmas += "universe " + std::string(mode_name(corpus.mode)) + "\n";
  for (auto ns : {Namespace::Tactic, Namespace::Type, Namespace::TopSymbol, Namespace::Lemma}) {
    const auto& table = corpus.symbols.table(ns);
    for (std::size_t i = 0; i < table.size(); ++i) {
      lemmas += "symbol " + std::string(namespace_name(ns)) + " " +
                std::to_string(table.base() + static_cast<std::int64_t>(i)) + " " +
                table.names()[i] + "\n";
    }
  }
  for (const auto& info : corpus.lemmas) {
    lemmas += "lemma " + escape_field(info.name) + "\t" + escape_field(info.statement) + "\t" +
              escape_field(info.script) + "\n";
  }
  write_file(dir / kLemmaFile, lemmas);
  for (const auto& [level, file] : kLevelFiles) write_file(dir / file, csv_text(corpus.vectors(level)));
}

void export_library(const TraceLibrary& library, TacticMode mode, const fs::path& dir) {
  write_corpus(build_corpus(library, mode), dir);
}

Corpus import_library(const fs::path& dir) {
  Corpus corpus;
  const auto lines = lines_of(read_file(dir / kLemmaFile));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto where = (dir / kLemmaFile).string() + ":" + std::to_string(i + 1) + ": ";
    const auto space = line.find(' ');
    const std::string key = line.substr(0, space);
    const std::string rest = space == std::string::npos ? "" : line.substr(space + 1);
    if (key == "library") {
      corpus.name = rest;
    } else if (key == "universe") {
      corpus.mode = parse_mode(rest);
    } else if (key == "symbol") {
      const auto parts = split(rest, ' ');
      if (parts.size() < 3) throw Error(ErrorCode::Format, where + "malformed symbol line");
      const auto ns = parse_namespace(parts[0]);
      const auto name_at = parts[0].size() + parts[1].size() + 2;
      const auto name = rest.substr(std::min(name_at, rest.size()));
      const auto code = corpus.symbols.intern(ns, name);
      if (std::to_string(code) != parts[1]) {
        throw Error(ErrorCode::Format, where + "symbol codes out of order");
      }
    } else if (key == "lemma") {
      const auto fields = split(rest, '\t');
      if (fields.size() != 3) throw Error(ErrorCode::Format, where + "lemma line needs 3 fields");
      corpus.lemmas.push_back({unescape_field(fields[0]), unescape_field(fields[1]),
                               unescape_field(fields[2]), corpus.name});
    } else {
      throw Error(ErrorCode::Format, where + "unknown entry '" + key + "'");
    }
  }
  corpus.symbols.freeze();

  for (const auto& [level, file] : kLevelFiles) {
    auto rows = parse_csv(read_file(dir / file));
    if (rows.size() != corpus.lemmas.size()) {
      throw Error(ErrorCode::Format, (dir / file).string() + ": " + std::to_string(rows.size()) +
                                         " rows for " + std::to_string(corpus.lemmas.size()) +
                                         " lemmas");
    }
    auto& out = level == Level::Goal ? corpus.goal : level == Level::Tactic ? corpus.tactic
                                                                            : corpus.tree;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out.push_back(make_vector(corpus.lemmas[i].name, level, std::move(rows[i])));
    }
  }
  return corpus;
}

Corpus merge_corpora(const std::vector<Corpus>& parts) {
  if (parts.empty()) return {};
  if (parts.size() == 1) return parts.front();
  Corpus out;
  out.name = parts.front().name;
  out.mode = parts.front().mode;
  out.symbols = parts.front().symbols;
  std::set<std::string> taken;
  for (const auto& part : parts) {
    if (part.mode != out.mode) {
      throw Error(ErrorCode::Format, "library '" + part.name + "' uses a different tactic universe");
    }
    for (std::size_t i = 0; i < part.lemmas.size(); ++i) {
      auto info = part.lemmas[i];
      if (taken.count(info.name)) info.name = part.name + "." + info.name;
      if (!taken.insert(info.name).second) {
        throw Error(ErrorCode::DuplicateLemma, "lemma '" + info.name + "' appears twice");
      }
      for (auto level : {Level::Goal, Level::Tactic, Level::Tree}) {
        auto v = part.vectors(level)[i];
        v.lemma_name = info.name;
        (level == Level::Goal ? out.goal : level == Level::Tactic ? out.tactic : out.tree)
            .push_back(std::move(v));
      }
      out.lemmas.push_back(std::move(info));
    }
  }
  return out;
}

Corpus import_libraries(const std::vector<fs::path>& dirs) {
  std::vector<Corpus> parts;
  for (const auto& dir : dirs) parts.push_back(import_library(dir));
  return merge_corpora(parts);
}

// Cluster XML ------------------------------------------------------------------

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string xml_unescape(std::string_view s) {
  static const std::map<std::string, char, std::less<>> entities{
      {"amp", '&'}, {"lt", '<'}, {"gt", '>'}, {"quot", '"'}, {"apos", '\''}};
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    const auto end = s.find(';', i);
    if (end == std::string_view::npos) throw Error(ErrorCode::Schema, "bad entity in cluster XML");
    const auto it = entities.find(s.substr(i + 1, end - i - 1));
    if (it == entities.end()) throw Error(ErrorCode::Schema, "unknown entity in cluster XML");
    out += it->second;
    i = end;
  }
  return out;
}

class XmlCursor {
 public:
  explicit XmlCursor(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void skip_prolog() {
    skip_space();
    while (text_.substr(pos_, 2) == "<?" || text_.substr(pos_, 4) == "<!--") {
      const bool comment = text_[pos_ + 1] == '!';
      const auto end = text_.find(comment ? "-->" : "?>", pos_);
      if (end == std::string_view::npos) throw Error(ErrorCode::Schema, "unterminated prolog");
      pos_ = end + (comment ? 3 : 2);
      skip_space();
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  // Next tag: name, whether it closes, whether it is self-closing.
  struct Tag {
    std::string name;
    bool closing = false;
    bool empty = false;
  };

  std::optional<Tag> peek_tag() {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != '<') return std::nullopt;
    const auto end = text_.find('>', pos_);
    if (end == std::string_view::npos) throw Error(ErrorCode::Schema, "unterminated tag");
    auto body = text_.substr(pos_ + 1, end - pos_ - 1);
    Tag tag;
    if (!body.empty() && body.front() == '/') {
      tag.closing = true;
      body.remove_prefix(1);
    }
    if (!body.empty() && body.back() == '/') {
      tag.empty = true;
      body.remove_suffix(1);
    }
    tag.name = trim(body);
    peek_end_ = end + 1;
    return tag;
  }

  Tag take_tag() {
    auto tag = peek_tag();
    if (!tag) throw Error(ErrorCode::Schema, "expected a tag in cluster XML");
    pos_ = peek_end_;
    return *tag;
  }

  void expect(std::string_view name, bool closing) {
    const auto tag = take_tag();
    if (tag.name != name || tag.closing != closing || tag.empty) {
      throw Error(ErrorCode::Schema, "expected <" + std::string(closing ? "/" : "") +
                                         std::string(name) + "> but found <" +
                                         (tag.closing ? "/" : "") + tag.name + ">");
    }
  }

  std::string text_until_tag() {
    const auto end = text_.find('<', pos_);
    if (end == std::string_view::npos) throw Error(ErrorCode::Schema, "unterminated element");
    auto content = text_.substr(pos_, end - pos_);
    pos_ = end;
    return xml_unescape(content);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t peek_end_ = 0;
};

}  // namespace

std::string cluster_xml_text(const ClusterReport& report) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (report.entries.empty()) return out + "<clusters/>\n";
  out += "<clusters>\n";
  char frequency[64];
  for (const auto& entry : report.entries) {
    out += "  <cluster>\n";
    for (const auto& lemma : entry.lemmas) out += "    <lemma>" + xml_escape(lemma) + "</lemma>\n";
    out += "  </cluster>\n";
    std::snprintf(frequency, sizeof frequency, "%.2f", entry.frequency_pct);
    out += "  <frequency>" + std::string(frequency) + "</frequency>\n";
  }
  return out + "</clusters>\n";
}

ClusterReport parse_cluster_xml(std::string_view text) {
  XmlCursor xml(text);
  xml.skip_prolog();
  ClusterReport report;
  const auto root = xml.take_tag();
  if (root.name != "clusters" || root.closing) {
    throw Error(ErrorCode::Schema, "root element must be <clusters>");
  }
  if (!root.empty) {
    while (true) {
      const auto tag = xml.take_tag();
      if (tag.closing && tag.name == "clusters") break;
      if (tag.name != "cluster" || tag.closing) {
        throw Error(ErrorCode::Schema, "expected <cluster> but found <" + tag.name + ">");
      }
      ClusterEntry entry;
      if (!tag.empty) {
        while (true) {
          const auto inner = xml.take_tag();
          if (inner.closing && inner.name == "cluster") break;
          if (inner.name != "lemma" || inner.closing || inner.empty) {
            throw Error(ErrorCode::Schema, "expected <lemma> inside <cluster>");
          }
          entry.lemmas.push_back(trim(xml.text_until_tag()));
          xml.expect("lemma", true);
        }
      }
      if (entry.lemmas.empty()) throw Error(ErrorCode::Schema, "empty <cluster>");
      const auto next = xml.peek_tag();
      if (!next || next->name != "frequency" || next->closing) {
        throw Error(ErrorCode::Schema, "<cluster> without <frequency>");
      }
      xml.expect("frequency", false);
      const auto value = trim(xml.text_until_tag());
      xml.expect("frequency", true);
      const auto [ptr, ec] =
          std::from_chars(value.data(), value.data() + value.size(), entry.frequency_pct);
      if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
        throw Error(ErrorCode::Schema, "frequency '" + value + "' is not a number");
      }
      report.entries.push_back(std::move(entry));
    }
  }
  if (!xml.at_end()) throw Error(ErrorCode::Schema, "content after </clusters>");
  return report;
}

void write_cluster_xml(const ClusterReport& report, const fs::path& path) {
  write_file(path, cluster_xml_text(report));
}

ClusterReport read_cluster_xml(const fs::path& path) { return parse_cluster_xml(read_file(path)); }

}  // namespace proofminer
