#pragma once

// Per-lemma symbolic feature tables at the goal, tactic and proof-tree
// levels, their numeric encoding and cell agreement counts.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "proofminer/model.hpp"

namespace proofminer {

enum class TacticMode { PlainCoq, SSReflect };

std::string_view mode_name(TacticMode mode);
TacticMode parse_mode(std::string_view text);

struct TacticUniverse {
  TacticMode mode = TacticMode::SSReflect;
  std::vector<std::string> tactics;

  static TacticUniverse plain_coq();
  static TacticUniverse ssreflect();
  static TacticUniverse for_mode(TacticMode mode);

  bool contains(const std::string& tactic) const;
};

inline constexpr std::size_t kTableDepth = 5;  // g1..g5 and td1..td5
inline constexpr double kEncodingCap = 1e12;

/// Number of vector entries for a level: 30, 5*|universe| or 5*(|universe|+2).
std::size_t vector_length(Level level, const TacticUniverse& universe);

struct BranchingCode {
  int level = 1;
  std::vector<int> subbranch_counts;
};

/// Level digit followed by one digit per branch: (2, [0,1]) -> 201.
std::int64_t encode_branching(const BranchingCode& code);

FeatureTable extract_goal_table(const ProofTrace& trace);
FeatureTable extract_tactic_table(const ProofTrace& trace, const TacticUniverse& universe);
FeatureTable extract_tree_table(const ProofTrace& trace, const TacticUniverse& universe);
FeatureTable extract_table(const ProofTrace& trace, Level level,
                           const TacticUniverse& universe);

/// Assigns codes to every tactic, type, top symbol and lemma of `trace` in
/// order of appearance.
void intern_trace(const ProofTrace& trace, SymbolTables& symbols);

/// Throws Error(UnknownSymbol) if a cell names a symbol `symbols` lacks.
FeatureVector encode_table(const FeatureTable& table, const SymbolTables& symbols,
                           const std::string& lemma_name = {});

struct Agreement {
  std::size_t matching = 0;
  std::size_t total = 0;
  bool operator==(const Agreement&) const = default;
};

Agreement agreement(const FeatureTable& a, const FeatureTable& b);

struct CorpusFeatures {
  std::vector<FeatureVector> vectors;
  SymbolTables symbols;  // frozen
};

CorpusFeatures extract_corpus(const std::vector<ProofTrace>& traces, Level level,
                              const TacticUniverse& universe);

/// Encodes one more trace against existing tables, interning any new symbols
/// into a thawed copy that is returned alongside.
std::pair<FeatureVector, SymbolTables> encode_extra(const ProofTrace& trace, Level level,
                                                    const TacticUniverse& universe,
                                                    const SymbolTables& symbols);

}  // namespace proofminer
