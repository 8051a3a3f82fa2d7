#include "proofminer/model.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

namespace proofminer {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage: return "usage";
    case ErrorCode::Parse: return "parse_error";
    case ErrorCode::UnterminatedProof: return "unterminated_proof";
    case ErrorCode::MissingStatement: return "missing_statement";
    case ErrorCode::Format: return "format_error";
    case ErrorCode::DuplicateLemma: return "duplicate_lemma";
    case ErrorCode::NameMismatch: return "name_mismatch";
    case ErrorCode::CountOverflow: return "count_overflow";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::UnknownSymbol: return "unknown_symbol";
    case ErrorCode::TooFewPoints: return "too_few_points";
    case ErrorCode::KTooLarge: return "k_too_large";
    case ErrorCode::DegenerateComponent: return "degenerate_component";
    case ErrorCode::SingleCluster: return "single_cluster";
    case ErrorCode::EmptyCluster: return "empty_cluster";
    case ErrorCode::CorpusTooSmall: return "corpus_too_small";
    case ErrorCode::OutOfRange: return "out_of_range";
    case ErrorCode::UnknownLemma: return "unknown_lemma";
    case ErrorCode::IncompleteProof: return "incomplete_proof";
    case ErrorCode::Schema: return "schema_error";
    case ErrorCode::Io: return "io_error";
  }
  return "unknown";
}

namespace {

std::string with_position(const std::string& message,
                          const std::optional<SourcePos>& pos) {
  if (!pos) return message;
  return std::to_string(pos->line) + ":" + std::to_string(pos->column) + ": " +
         message;
}

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<SourcePos> pos)
    : std::runtime_error(with_position(message, pos)), code_(code), pos_(pos) {}

// ---------------------------------------------------------------------------

namespace {

struct TreeCheck {
  const ProofTrace& trace;
  std::vector<std::string>& out;
  std::set<int> seen;
  int closed = 0;

  void visit(const TreeNode& node, int expected_depth) {
    if (node.depth != expected_depth) {
      out.push_back("node depth " + std::to_string(node.depth) +
                    " does not equal parent depth + 1");
    }
    if (node.step < 0 || node.step >= static_cast<int>(trace.steps.size())) {
      out.push_back("tree references missing step " + std::to_string(node.step));
    } else {
      if (!seen.insert(node.step).second) {
        out.push_back("step " + std::to_string(node.step) +
                      " appears twice in the tree");
      }
      const auto& subgoals = trace.steps[node.step].n_subgoals_after;
      if (subgoals) {
        if ((*subgoals == 0) != node.closed) {
          out.push_back("step " + std::to_string(node.step) +
                        " closed flag disagrees with its subgoal count");
        }
        if (static_cast<int>(node.children.size()) > *subgoals) {
          out.push_back("step " + std::to_string(node.step) +
                        " has more children than generated subgoals");
        }
      }
    }
    if (node.closed) {
      ++closed;
      if (!node.children.empty()) out.push_back("closed node has children");
    }
    for (const auto& child : node.children) visit(child, node.depth + 1);
  }
};

}  // namespace

std::vector<std::string> validate_trace(const ProofTrace& trace) {
  std::vector<std::string> out;
  if (trace.lemma_name.empty()) out.push_back("empty lemma name");
  if (trace.complete && trace.steps.empty()) out.push_back("empty complete proof");

  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& step = trace.steps[i];
    const auto where = "step " + std::to_string(i);
    if (step.tactics.empty()) out.push_back(where + " has no tactics");
    if (step.n_subgoals_after && *step.n_subgoals_after < 0) {
      out.push_back(where + " has a negative subgoal count");
    }
    for (const auto& tactic : step.tactics) {
      if (tactic.name.empty()) out.push_back(where + " has an unnamed tactic");
      for (const auto& arg : tactic.args) {
        if (arg.role == ArgRole::ExternalLemma && arg.name.empty()) {
          out.push_back(where + " has an external lemma argument without a name");
        }
      }
    }
  }

  if (trace.tree) {
    TreeCheck check{trace, out, {}, 0};
    check.visit(*trace.tree, 1);
    const bool counts_known =
        std::all_of(trace.steps.begin(), trace.steps.end(),
                    [](const ProofStep& s) { return s.n_subgoals_after.has_value(); });
    if (counts_known && check.seen.size() == trace.steps.size()) {
      const auto discharged =
          std::count_if(trace.steps.begin(), trace.steps.end(),
                        [](const ProofStep& s) { return *s.n_subgoals_after == 0; });
      if (discharged != check.closed) {
        out.push_back("closed leaf count " + std::to_string(check.closed) +
                      " does not match " + std::to_string(discharged) +
                      " discharged branches");
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view namespace_name(Namespace ns) {
  switch (ns) {
    case Namespace::Tactic: return "tactic";
    case Namespace::Type: return "type";
    case Namespace::TopSymbol: return "top";
    case Namespace::Lemma: return "lemma";
  }
  return "?";
}

std::int64_t SymbolTable::intern(const std::string& name) {
  if (auto it = codes_.find(name); it != codes_.end()) return it->second;
  const auto code = base_ + static_cast<std::int64_t>(names_.size());
  codes_.emplace(name, code);
  names_.push_back(name);
  return code;
}

std::optional<std::int64_t> SymbolTable::find(const std::string& name) const {
  if (auto it = codes_.find(name); it != codes_.end()) return it->second;
  return std::nullopt;
}

const std::string& SymbolTable::name_of(std::int64_t code) const {
  const auto index = code - base_;
  if (index < 0 || index >= static_cast<std::int64_t>(names_.size())) {
    throw Error(ErrorCode::UnknownSymbol, "no symbol with code " + std::to_string(code));
  }
  return names_[static_cast<std::size_t>(index)];
}

SymbolTables::SymbolTables()
    : tables_{SymbolTable(1), SymbolTable(1), SymbolTable(1),
              SymbolTable(kCodeIH + 1)} {}

SymbolTable& SymbolTables::mutable_table(Namespace ns) {
  return tables_[static_cast<std::size_t>(ns)];
}

const SymbolTable& SymbolTables::table(Namespace ns) const {
  return tables_[static_cast<std::size_t>(ns)];
}

std::int64_t SymbolTables::intern(Namespace ns, const std::string& name) {
  if (frozen_) {
    if (auto code = find(ns, name)) return *code;
    throw std::logic_error("intern into frozen symbol tables: " + name);
  }
  return mutable_table(ns).intern(name);
}

std::optional<std::int64_t> SymbolTables::find(Namespace ns,
                                               const std::string& name) const {
  return table(ns).find(name);
}

SymbolTables SymbolTables::thawed() const {
  SymbolTables copy = *this;
  copy.frozen_ = false;
  return copy;
}

bool SymbolTables::empty() const {
  return std::all_of(tables_.begin(), tables_.end(),
                     [](const SymbolTable& t) { return t.size() == 0; });
}

// ---------------------------------------------------------------------------

std::string_view level_name(Level level) {
  switch (level) {
    case Level::Goal: return "goal";
    case Level::Tactic: return "tactic";
    case Level::Tree: return "tree";
  }
  return "?";
}

Level parse_level(std::string_view text) {
  const auto key = lower(text);
  if (key == "goal" || key == "goals") return Level::Goal;
  if (key == "tactic" || key == "tactics") return Level::Tactic;
  if (key == "tree" || key == "proof-tree") return Level::Tree;
  throw Error(ErrorCode::OutOfRange, "unknown proof level '" + std::string(text) + "'");
}

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string link_to_string(const Link& link) {
  switch (link.role) {
    case ArgRole::None: return "no";
    case ArgRole::Hyp: return "Hyp";
    case ArgRole::IH: return "IH";
    case ArgRole::ExternalLemma: return link.lemma;
  }
  return "?";
}

}  // namespace

std::string cell_to_string(const Cell& cell) {
  struct Render {
    std::string operator()(const Absent&) const { return "-"; }
    std::string operator()(const Count& c) const { return std::to_string(c.value); }
    std::string operator()(const Symbols& s) const {
      return join(s.items, s.ns == Namespace::Tactic ? ";" : ",");
    }
    std::string operator()(const Links& l) const {
      std::vector<std::string> parts;
      for (const auto& link : l.items) parts.push_back(link_to_string(link));
      return join(parts, ",");
    }
  };
  return std::visit(Render{}, cell);
}

FeatureTable::FeatureTable(Level level, std::vector<std::string> row_labels,
                           std::vector<std::string> col_labels)
    : level_(level),
      row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)),
      cells_(row_labels_.size() * col_labels_.size(), Absent{}) {}

const Cell& FeatureTable::at(std::size_t row, std::size_t col) const {
  if (row >= rows() || col >= cols()) throw std::out_of_range("FeatureTable::at");
  return cells_[row * cols() + col];
}

Cell& FeatureTable::at(std::size_t row, std::size_t col) {
  if (row >= rows() || col >= cols()) throw std::out_of_range("FeatureTable::at");
  return cells_[row * cols() + col];
}

std::size_t FeatureTable::row_index(std::string_view label) const {
  auto it = std::find(row_labels_.begin(), row_labels_.end(), label);
  if (it == row_labels_.end()) {
    throw Error(ErrorCode::OutOfRange, "no row '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - row_labels_.begin());
}

std::size_t FeatureTable::col_index(std::string_view label) const {
  auto it = std::find(col_labels_.begin(), col_labels_.end(), label);
  if (it == col_labels_.end()) {
    throw Error(ErrorCode::OutOfRange, "no column '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - col_labels_.begin());
}

// ---------------------------------------------------------------------------

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::KMeans: return "kmeans";
    case Algorithm::GaussianMixture: return "gaussian";
    case Algorithm::FarthestFirst: return "farthest-first";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view text) {
  const auto key = lower(text);
  if (key == "kmeans" || key == "k-means") return Algorithm::KMeans;
  if (key == "gaussian" || key == "gmm" || key == "em") return Algorithm::GaussianMixture;
  if (key == "farthest-first" || key == "farthestfirst" || key == "farthest_first") {
    return Algorithm::FarthestFirst;
  }
  throw Error(ErrorCode::OutOfRange, "unknown algorithm '" + std::string(text) + "'");
}

void EngineConfig::validate() const {
  if (granularity < 1 || granularity > 5) {
    throw Error(ErrorCode::OutOfRange, "granularity must be in 1..5");
  }
  if (frequency_param < 1 || frequency_param > 3) {
    throw Error(ErrorCode::OutOfRange, "frequency parameter must be in 1..3");
  }
  if (runs < 1) throw Error(ErrorCode::OutOfRange, "runs must be at least 1");
  if (!(proximity_threshold >= -1.0 && proximity_threshold <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "proximity threshold must be in [-1, 1]");
  }
  if (!(variance_target > 0.0 && variance_target <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "variance target must be in (0, 1]");
  }
}

}  // namespace proofminer
