#pragma once

// Shared domain types: recorded proofs, symbolic feature tables, numeric
// vectors, engine configuration and cluster reports.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "proofminer/error.hpp"

namespace proofminer {

enum class ArgRole { None, Hyp, IH, ExternalLemma };

struct Arg {
  std::optional<std::string> type;  // nullopt when the type was never recorded
  ArgRole role = ArgRole::None;
  std::string name;  // identifier as written; required for ExternalLemma

  bool operator==(const Arg&) const = default;
};

struct TacticApp {
  std::string name;
  std::vector<Arg> args;

  bool operator==(const TacticApp&) const = default;
};

/// One sentence of the derivation. A `t1; t2` chain is a single step.
struct ProofStep {
  std::optional<std::string> goal_top_symbol;
  std::vector<TacticApp> tactics;
  std::optional<int> n_subgoals_after;

  bool operator==(const ProofStep&) const = default;
};

/// A node is one tactic application; `step` indexes ProofTrace::steps and
/// identifies the tactics on the edge reaching the node. The root has depth 1.
struct TreeNode {
  int step = 0;
  int depth = 1;
  bool closed = false;
  std::vector<TreeNode> children;

  bool operator==(const TreeNode&) const = default;
};

struct ProofTrace {
  std::string lemma_name;
  std::string statement;
  std::string library;
  std::vector<ProofStep> steps;
  std::optional<TreeNode> tree;
  bool complete = false;

  bool operator==(const ProofTrace&) const = default;
};

/// Every invariant violation of `trace`; empty means the trace is valid.
std::vector<std::string> validate_trace(const ProofTrace& trace);

/// Pre-order walk of the tree, visiting nodes left to right.
template <typename Fn>
void for_each_node(const TreeNode& node, Fn&& fn) {
  fn(node);
  for (const auto& child : node.children) for_each_node(child, fn);
}

// ---------------------------------------------------------------------------
// Symbol tables

enum class Namespace { Tactic, Type, TopSymbol, Lemma };

std::string_view namespace_name(Namespace ns);

/// Reserved codes in the hypothesis-or-lemma namespace. Lemma codes start
/// right after them.
inline constexpr std::int64_t kCodeNo = 0;
inline constexpr std::int64_t kCodeHyp = 1;
inline constexpr std::int64_t kCodeIH = 2;

/// Append-only bijection between names and consecutive integer codes.
class SymbolTable {
 public:
  explicit SymbolTable(std::int64_t base = 1) : base_(base) {}

  std::int64_t intern(const std::string& name);
  std::optional<std::int64_t> find(const std::string& name) const;
  const std::string& name_of(std::int64_t code) const;

  std::int64_t base() const { return base_; }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const SymbolTable&) const = default;

 private:
  std::int64_t base_;
  std::map<std::string, std::int64_t> codes_;
  std::vector<std::string> names_;
};

class SymbolTables {
 public:
  SymbolTables();

  /// Throws std::logic_error once frozen.
  std::int64_t intern(Namespace ns, const std::string& name);
  std::optional<std::int64_t> find(Namespace ns, const std::string& name) const;

  const SymbolTable& table(Namespace ns) const;

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  /// An unfrozen copy that can keep interning.
  SymbolTables thawed() const;

  bool empty() const;
  bool operator==(const SymbolTables& other) const { return tables_ == other.tables_; }

 private:
  SymbolTable& mutable_table(Namespace ns);

  std::vector<SymbolTable> tables_;
  bool frozen_ = false;
};

// ---------------------------------------------------------------------------
// Feature tables

enum class Level { Goal, Tactic, Tree };

std::string_view level_name(Level level);
/// Accepts "goal", "tactic", "tree" (case-insensitive).
Level parse_level(std::string_view text);

struct Absent {
  bool operator==(const Absent&) const = default;
};

struct Count {
  std::int64_t value = 0;
  bool operator==(const Count&) const = default;
};

struct Symbols {
  Namespace ns = Namespace::Tactic;
  std::vector<std::string> items;
  bool operator==(const Symbols&) const = default;
};

/// One entry of a "tactic argument is hypothesis?" cell.
struct Link {
  ArgRole role = ArgRole::None;
  std::string lemma;  // only for ExternalLemma
  bool operator==(const Link&) const = default;
};

struct Links {
  std::vector<Link> items;
  bool operator==(const Links&) const = default;
};

using Cell = std::variant<Absent, Count, Symbols, Links>;

std::string cell_to_string(const Cell& cell);

class FeatureTable {
 public:
  FeatureTable(Level level, std::vector<std::string> row_labels,
               std::vector<std::string> col_labels);

  Level level() const { return level_; }
  std::size_t rows() const { return row_labels_.size(); }
  std::size_t cols() const { return col_labels_.size(); }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }

  const Cell& at(std::size_t row, std::size_t col) const;
  Cell& at(std::size_t row, std::size_t col);
  const std::vector<Cell>& cells() const { return cells_; }

  /// Index of a row or column by label; throws Error(OutOfRange) if missing.
  std::size_t row_index(std::string_view label) const;
  std::size_t col_index(std::string_view label) const;

  bool operator==(const FeatureTable&) const = default;

 private:
  Level level_;
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
  std::vector<Cell> cells_;  // row-major
};

struct FeatureVector {
  std::string lemma_name;
  Level level = Level::Goal;
  std::vector<double> values;
  bool saturated = false;  // some cell hit the magnitude cap

  bool operator==(const FeatureVector&) const = default;
};

// ---------------------------------------------------------------------------
// Engine configuration and results

enum class Algorithm { KMeans, GaussianMixture, FarthestFirst };

std::string_view algorithm_name(Algorithm algorithm);
/// Accepts "kmeans", "gaussian", "em", "farthest-first" and a few spellings.
Algorithm parse_algorithm(std::string_view text);

struct EngineConfig {
  Algorithm algorithm = Algorithm::KMeans;
  Level level = Level::Goal;
  int granularity = 3;
  int frequency_param = 1;
  int runs = 200;
  std::uint64_t master_seed = 0;
  double proximity_threshold = 0.5;
  std::size_t pca_min_dim = 15;
  double variance_target = 0.95;
  bool use_pca = true;
  unsigned threads = 0;  // 0: hardware concurrency

  /// Throws Error(OutOfRange) naming the offending field.
  void validate() const;

  bool operator==(const EngineConfig&) const = default;
};

struct ClusterEntry {
  std::vector<std::string> lemmas;  // sorted, unique
  double frequency_pct = 0.0;

  bool operator==(const ClusterEntry&) const = default;
};

struct ClusterReport {
  std::vector<ClusterEntry> entries;  // descending frequency
  EngineConfig config;
  std::size_t n_clusters = 0;
  std::size_t corpus_size = 0;

  bool operator==(const ClusterReport&) const = default;
};

}  // namespace proofminer
