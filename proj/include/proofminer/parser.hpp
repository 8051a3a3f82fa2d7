#pragma once

// Proof-script subset (Lemma ... Proof. ... Qed.) and the trace file format
// that supplies goal snapshots and proof trees.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proofminer/model.hpp"

namespace proofminer {

enum class TokenKind {
  Keyword,        // Lemma/Theorem, Proof, Qed/Defined/Admitted
  Ident,
  Colon,
  Dot,
  Semicolon,
  ArrowIntro,     // "=>"
  MoveColon,      // ":" inside a tactic
  Slash,          // "/" inside a tactic
  Bullet,         // "-", "+", "*", "{", "}" focusing marks
  StatementText,
  TacticText,
};

struct ScriptToken {
  TokenKind kind;
  std::string text;
  SourcePos pos;

  bool operator==(const ScriptToken&) const = default;
};

/// Sentence-level tokens. Throws Error(UnterminatedProof) when a `Proof.`
/// block runs into end of input (or another Lemma) without `Qed.`.
std::vector<ScriptToken> tokenize(std::string_view source);

/// Tokens of a single tactic text ("move/andP => [_ H2]").
std::vector<ScriptToken> tokenize_tactic(std::string_view text, SourcePos pos = {});

struct ScriptProof {
  std::string lemma_name;
  std::string statement;
  std::vector<std::vector<TacticApp>> sentences;
  std::vector<std::string> sentence_texts;
  bool complete = false;
  std::vector<std::string> warnings;
  SourcePos pos;
};

std::vector<ScriptProof> parse_script(std::string_view source);

/// Parses one tactic; `bound` holds names introduced earlier in the proof and
/// receives the names this tactic introduces.
TacticApp parse_tactic(std::string_view text, std::vector<std::string>& bound);

// Trace format -------------------------------------------------------------

struct TraceLibrary {
  std::string name;
  std::vector<ProofTrace> traces;
};

TraceLibrary read_trace_text(std::string_view text);
TraceLibrary read_trace_file(const std::filesystem::path& path);

std::string write_trace_text(const TraceLibrary& library);
void write_trace_file(const TraceLibrary& library, const std::filesystem::path& path);

/// Tactic data from the script; goal snapshots, argument types and roles and
/// the tree from `partial` when present.
ProofTrace merge_script_into_trace(const ScriptProof& script,
                                   const std::optional<ProofTrace>& partial);

/// Human-readable script rebuilt from a trace.
std::string render_script(const ProofTrace& trace);

}  // namespace proofminer
