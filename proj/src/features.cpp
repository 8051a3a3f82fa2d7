#include "proofminer/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace proofminer {

std::string_view mode_name(TacticMode mode) {
  return mode == TacticMode::PlainCoq ? "coq" : "ssreflect";
}

TacticMode parse_mode(std::string_view text) {
  std::string key(text);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (key == "coq" || key == "plain" || key == "plaincoq") return TacticMode::PlainCoq;
  if (key == "ssreflect" || key == "ssr") return TacticMode::SSReflect;
  throw Error(ErrorCode::OutOfRange, "unknown tactic mode '" + std::string(text) + "'");
}

TacticUniverse TacticUniverse::plain_coq() {
  return {TacticMode::PlainCoq,
          {"intro", "intros", "apply", "rewrite", "simpl", "trivial", "auto",
           "induction", "destruct", "case"}};
}

TacticUniverse TacticUniverse::ssreflect() {
  return {TacticMode::SSReflect, {"move =>", "move :", "move/", "rewrite", "case", "elim"}};
}

TacticUniverse TacticUniverse::for_mode(TacticMode mode) {
  return mode == TacticMode::PlainCoq ? plain_coq() : ssreflect();
}

bool TacticUniverse::contains(const std::string& tactic) const {
  return std::find(tactics.begin(), tactics.end(), tactic) != tactics.end();
}

std::size_t vector_length(Level level, const TacticUniverse& universe) {
  switch (level) {
    case Level::Goal: return kTableDepth * 6;
    case Level::Tactic: return universe.tactics.size() * 5;
    case Level::Tree: return kTableDepth * (universe.tactics.size() + 2);
  }
  return 0;
}

std::int64_t encode_branching(const BranchingCode& code) {
  if (code.level < 1 || code.level > static_cast<int>(kTableDepth)) {
    throw Error(ErrorCode::OutOfRange,
                "branching level " + std::to_string(code.level) + " outside 1..5");
  }
  if (code.subbranch_counts.size() > 17) {
    throw Error(ErrorCode::CountOverflow, "too many branches to encode at one level");
  }
  std::int64_t value = code.level;
  for (int count : code.subbranch_counts) {
    if (count < 0 || count > 9) {
      throw Error(ErrorCode::CountOverflow,
                  "subbranch count " + std::to_string(count) + " does not fit one digit");
    }
    value = value * 10 + count;
  }
  return value;
}

// ---------------------------------------------------------------------------

namespace {

Link link_of(const Arg& arg) {
  Link link{arg.role, {}};
  if (arg.role == ArgRole::ExternalLemma) link.lemma = arg.name;
  return link;
}

/// Types of `args`, or ["none"] when there are none; Absent if any is unknown.
Cell type_cell(const std::vector<const Arg*>& args) {
  Symbols cell{Namespace::Type, {}};
  for (const Arg* arg : args) {
    if (!arg->type) return Absent{};
    cell.items.push_back(*arg->type);
  }
  if (cell.items.empty()) cell.items.push_back("none");
  return cell;
}

/// Roles of the arguments that refer to something; ["no"] otherwise.
Cell link_cell(const std::vector<const Arg*>& args) {
  Links cell;
  for (const Arg* arg : args) {
    if (arg->role != ArgRole::None) cell.items.push_back(link_of(*arg));
  }
  if (cell.items.empty()) cell.items.push_back(Link{});
  return cell;
}

std::vector<std::string> row_labels(std::string_view prefix) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= kTableDepth; ++i) out.push_back(std::string(prefix) + std::to_string(i));
  return out;
}

}  // namespace

FeatureTable extract_goal_table(const ProofTrace& trace) {
  FeatureTable table(Level::Goal, row_labels("g"),
                     {"tactics", "n_tactics", "arg_type", "arg_is_hyp", "top_symbol",
                      "n_subgoals"});
  const auto rows = std::min(kTableDepth, trace.steps.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& step = trace.steps[r];
    Symbols names{Namespace::Tactic, {}};
    std::vector<const Arg*> args;
    for (const auto& tactic : step.tactics) {
      names.items.push_back(tactic.name);
      for (const auto& arg : tactic.args) args.push_back(&arg);
    }
    table.at(r, 0) = names;
    table.at(r, 1) = Count{static_cast<std::int64_t>(step.tactics.size())};
    table.at(r, 2) = type_cell(args);
    table.at(r, 3) = link_cell(args);
    if (step.goal_top_symbol) {
      table.at(r, 4) = Symbols{Namespace::TopSymbol, {*step.goal_top_symbol}};
    }
    if (step.n_subgoals_after) table.at(r, 5) = Count{*step.n_subgoals_after};
  }
  return table;
}

FeatureTable extract_tactic_table(const ProofTrace& trace, const TacticUniverse& universe) {
  FeatureTable table(Level::Tactic, universe.tactics,
                     {"arg1_type", "rest_arg_types", "arg_is_hyp", "top_symbols",
                      "n_times_used"});
  for (std::size_t r = 0; r < universe.tactics.size(); ++r) {
    const auto& name = universe.tactics[r];
    std::vector<const Arg*> args;
    Symbols tops{Namespace::TopSymbol, {}};
    bool tops_known = true;
    std::int64_t uses = 0;
    for (const auto& step : trace.steps) {
      for (const auto& tactic : step.tactics) {
        if (tactic.name != name) continue;
        ++uses;
        for (const auto& arg : tactic.args) args.push_back(&arg);
        if (step.goal_top_symbol) tops.items.push_back(*step.goal_top_symbol);
        else tops_known = false;
      }
    }
    if (uses == 0) continue;
    if (args.empty()) {
      table.at(r, 0) = Symbols{Namespace::Type, {"none"}};
      table.at(r, 1) = Symbols{Namespace::Type, {"none"}};
    } else {
      table.at(r, 0) = type_cell({args.front()});
      table.at(r, 1) = type_cell(std::vector<const Arg*>(args.begin() + 1, args.end()));
    }
    table.at(r, 2) = link_cell(args);
    if (tops_known) table.at(r, 3) = tops;
    table.at(r, 4) = Count{uses};
  }
  return table;
}

FeatureTable extract_tree_table(const ProofTrace& trace, const TacticUniverse& universe) {
  auto cols = universe.tactics;
  cols.push_back("branching");
  cols.push_back("closed");
  FeatureTable table(Level::Tree, row_labels("td"), cols);
  if (!trace.tree) return table;

  std::vector<std::vector<const TreeNode*>> by_depth(kTableDepth);
  for_each_node(*trace.tree, [&](const TreeNode& node) {
    if (node.depth >= 1 && node.depth <= static_cast<int>(kTableDepth)) {
      by_depth[node.depth - 1].push_back(&node);
    }
  });

  const auto width = universe.tactics.size();
  for (std::size_t d = 0; d < kTableDepth; ++d) {
    const auto& nodes = by_depth[d];
    if (nodes.empty()) continue;
    BranchingCode code{static_cast<int>(d + 1), {}};
    std::int64_t closed = 0;
    for (const TreeNode* node : nodes) {
      code.subbranch_counts.push_back(static_cast<int>(node->children.size()));
      if (node->closed) ++closed;
    }
    table.at(d, width) = Count{encode_branching(code)};
    table.at(d, width + 1) = Count{closed};

    for (std::size_t c = 0; c < width; ++c) {
      const auto& name = universe.tactics[c];
      std::vector<const Arg*> args;
      bool used = false;
      for (const TreeNode* node : nodes) {
        if (node->step < 0 || node->step >= static_cast<int>(trace.steps.size())) continue;
        for (const auto& tactic : trace.steps[node->step].tactics) {
          if (tactic.name != name) continue;
          used = true;
          for (const auto& arg : tactic.args) args.push_back(&arg);
        }
      }
      if (!used) continue;
      // rewrite tracks what the rules are; every other tactic its argument types
      table.at(d, c) = name == "rewrite" ? link_cell(args) : type_cell(args);
    }
  }
  return table;
}

FeatureTable extract_table(const ProofTrace& trace, Level level,
                           const TacticUniverse& universe) {
  switch (level) {
    case Level::Goal: return extract_goal_table(trace);
    case Level::Tactic: return extract_tactic_table(trace, universe);
    case Level::Tree: return extract_tree_table(trace, universe);
  }
  throw Error(ErrorCode::OutOfRange, "unknown level");
}

void intern_trace(const ProofTrace& trace, SymbolTables& symbols) {
  for (const auto& step : trace.steps) {
    if (step.goal_top_symbol) symbols.intern(Namespace::TopSymbol, *step.goal_top_symbol);
    for (const auto& tactic : step.tactics) {
      symbols.intern(Namespace::Tactic, tactic.name);
      if (tactic.args.empty()) symbols.intern(Namespace::Type, "none");
      for (const auto& arg : tactic.args) {
        if (arg.type) symbols.intern(Namespace::Type, *arg.type);
        if (arg.role == ArgRole::ExternalLemma) symbols.intern(Namespace::Lemma, arg.name);
      }
    }
  }
  symbols.intern(Namespace::Type, "none");
}

// ---------------------------------------------------------------------------

namespace {

std::int64_t code_of(const SymbolTables& symbols, Namespace ns, const std::string& name) {
  auto code = symbols.find(ns, name);
  if (!code) {
    throw Error(ErrorCode::UnknownSymbol, std::string(namespace_name(ns)) + " '" + name +
                                              "' has no code");
  }
  return *code;
}

struct Encoded {
  double value = 0.0;
  bool saturated = false;
};

/// Concatenated decimal digits, read as a number and capped in magnitude.
Encoded from_digits(const std::string& digits, bool negative) {
  Encoded out;
  out.value = digits.empty() ? 0.0 : std::strtod(digits.c_str(), nullptr);
  if (out.value > kEncodingCap) {
    out.value = kEncodingCap;
    out.saturated = true;
  }
  if (negative) out.value = -out.value;
  return out;
}

Encoded encode_cell(const Cell& cell, const SymbolTables& symbols) {
  struct Visitor {
    const SymbolTables& symbols;
    Encoded operator()(const Absent&) const { return {}; }
    Encoded operator()(const Count& c) const {
      return {static_cast<double>(c.value), false};
    }
    Encoded operator()(const Symbols& s) const {
      std::string digits;
      for (const auto& item : s.items) digits += std::to_string(code_of(symbols, s.ns, item));
      return from_digits(digits, s.ns == Namespace::Type);
    }
    Encoded operator()(const Links& l) const {
      std::string digits;
      for (const auto& link : l.items) {
        switch (link.role) {
          case ArgRole::None: digits += std::to_string(kCodeNo); break;
          case ArgRole::Hyp: digits += std::to_string(kCodeHyp); break;
          case ArgRole::IH: digits += std::to_string(kCodeIH); break;
          case ArgRole::ExternalLemma:
            digits += std::to_string(code_of(symbols, Namespace::Lemma, link.lemma));
            break;
        }
      }
      return from_digits(digits, false);
    }
  };
  return std::visit(Visitor{symbols}, cell);
}

}  // namespace

FeatureVector encode_table(const FeatureTable& table, const SymbolTables& symbols,
                           const std::string& lemma_name) {
  FeatureVector out;
  out.lemma_name = lemma_name;
  out.level = table.level();
  out.values.reserve(table.cells().size());
  for (const auto& cell : table.cells()) {
    const auto encoded = encode_cell(cell, symbols);
    out.values.push_back(encoded.value);
    out.saturated = out.saturated || encoded.saturated;
  }
  return out;
}

Agreement agreement(const FeatureTable& a, const FeatureTable& b) {
  if (a.level() != b.level() || a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "tables differ in level or shape");
  }
  Agreement out{0, a.cells().size()};
  for (std::size_t i = 0; i < a.cells().size(); ++i) {
    if (a.cells()[i] == b.cells()[i]) ++out.matching;
  }
  return out;
}

CorpusFeatures extract_corpus(const std::vector<ProofTrace>& traces, Level level,
                              const TacticUniverse& universe) {
  CorpusFeatures out;
  for (const auto& trace : traces) intern_trace(trace, out.symbols);
  out.symbols.freeze();
  out.vectors.reserve(traces.size());
  for (const auto& trace : traces) {
    out.vectors.push_back(
        encode_table(extract_table(trace, level, universe), out.symbols, trace.lemma_name));
  }
  return out;
}

std::pair<FeatureVector, SymbolTables> encode_extra(const ProofTrace& trace, Level level,
                                                    const TacticUniverse& universe,
                                                    const SymbolTables& symbols) {
  auto extended = symbols.thawed();
  intern_trace(trace, extended);
  extended.freeze();
  auto vector = encode_table(extract_table(trace, level, universe), extended, trace.lemma_name);
  return {std::move(vector), std::move(extended)};
}

}  // namespace proofminer
