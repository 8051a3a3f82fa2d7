#include "proofminer/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace proofminer {
namespace {

constexpr std::array kLemmaWords = {"Lemma", "Theorem", "Fact", "Remark",
                                    "Corollary", "Proposition"};
constexpr std::array kEndWords = {"Qed", "Defined", "Admitted", "Abort"};
constexpr std::array kVernacular = {
    "Require", "Import",   "Export",    "From",      "Open",      "Close",
    "Set",     "Unset",    "Section",   "End",       "Variable",  "Variables",
    "Hypothesis", "Definition", "Fixpoint", "Inductive", "Notation", "Arguments",
    "Implicit", "Module", "Context",   "Local",     "Global",    "Check",
    "Print",   "Search",   "Infix",     "Let"};

template <std::size_t N>
bool one_of(std::string_view word, const std::array<const char*, N>& words) {
  return std::any_of(words.begin(), words.end(),
                     [&](const char* w) { return word == w; });
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool is_ident_char(char c) {
  return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '\'';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

/// Maps byte offsets to 1-based line/column.
class LineIndex {
 public:
  explicit LineIndex(std::string_view src) {
    starts_.push_back(0);
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (src[i] == '\n') starts_.push_back(i + 1);
    }
  }
  SourcePos at(std::size_t offset) const {
    auto it = std::upper_bound(starts_.begin(), starts_.end(), offset);
    const auto line = static_cast<int>(it - starts_.begin());
    const auto col = static_cast<int>(offset - starts_[line - 1]) + 1;
    return {line, col};
  }

 private:
  std::vector<std::size_t> starts_;
};

/// Position of the comment end (one past "*)"), handling nesting.
std::size_t skip_comment(std::string_view src, std::size_t i) {
  int depth = 0;
  while (i < src.size()) {
    if (src.substr(i, 2) == "(*") {
      ++depth;
      i += 2;
    } else if (src.substr(i, 2) == "*)") {
      i += 2;
      if (--depth == 0) return i;
    } else {
      ++i;
    }
  }
  return src.size();
}

/// Offset of the terminating '.', or npos.
std::size_t find_sentence_end(std::string_view src, std::size_t i) {
  while (i < src.size()) {
    if (src.substr(i, 2) == "(*") {
      i = skip_comment(src, i);
      continue;
    }
    if (src[i] == '"') {
      auto close = src.find('"', i + 1);
      if (close == std::string_view::npos) return close;
      i = close + 1;
      continue;
    }
    if (src[i] == '.' && (i + 1 == src.size() || is_space(src[i + 1]))) return i;
    ++i;
  }
  return std::string_view::npos;
}

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view src) : src_(src), lines_(src) {}

  std::vector<ScriptToken> run() {
    std::size_t i = 0;
    while (true) {
      i = skip_blank(i);
      if (i >= src_.size()) break;
      i = sentence(i);
    }
    if (in_proof_) {
      throw Error(ErrorCode::UnterminatedProof, "no 'Qed.' before end of input",
                  proof_pos_);
    }
    return std::move(out_);
  }

 private:
  std::size_t skip_blank(std::size_t i) const {
    while (i < src_.size()) {
      if (is_space(src_[i])) {
        ++i;
      } else if (src_.substr(i, 2) == "(*") {
        i = skip_comment(src_, i);
      } else {
        break;
      }
    }
    return i;
  }

  void emit(TokenKind kind, std::string_view text, std::size_t offset) {
    out_.push_back({kind, std::string(text), lines_.at(offset)});
  }

  std::size_t sentence(std::size_t start) {
    if (in_proof_) {
      const char c = src_[start];
      if (c == '{' || c == '}') {
        emit(TokenKind::Bullet, src_.substr(start, 1), start);
        return start + 1;
      }
      if (c == '-' || c == '+' || c == '*') {
        std::size_t j = start;
        while (j < src_.size() && src_[j] == c) ++j;
        if (j == src_.size() || is_space(src_[j])) {
          emit(TokenKind::Bullet, src_.substr(start, j - start), start);
          return j;
        }
      }
    }

    const auto end = find_sentence_end(src_, start);
    if (end == std::string_view::npos) {
      if (in_proof_) {
        throw Error(ErrorCode::UnterminatedProof, "no 'Qed.' before end of input",
                    proof_pos_);
      }
      throw Error(ErrorCode::Parse, "expected '.' to end the sentence",
                  lines_.at(start));
    }
    const auto body = src_.substr(start, end - start);
    std::size_t w = 0;
    while (w < body.size() && is_ident_char(body[w])) ++w;
    const auto word = body.substr(0, w);

    if (!in_proof_ && one_of(word, kLemmaWords)) {
      lemma_header(start, body, w);
    } else if (!in_proof_ && word == "Proof") {
      emit(TokenKind::Keyword, word, start);
      auto rest = trim(body.substr(w));
      if (!rest.empty()) {
        emit(TokenKind::StatementText, rest, start + (rest.data() - body.data()));
      }
      in_proof_ = true;
      proof_pos_ = lines_.at(start);
    } else if (!in_proof_ && one_of(word, kVernacular)) {
      emit(TokenKind::StatementText, body, start);
    } else if (in_proof_ && one_of(word, kEndWords)) {
      emit(TokenKind::Keyword, word, start);
      in_proof_ = false;
    } else if (in_proof_ && one_of(word, kLemmaWords)) {
      throw Error(ErrorCode::UnterminatedProof,
                  "'" + std::string(word) + "' starts before 'Qed.'", proof_pos_);
    } else {
      tactic_sentence(start, body);
    }
    emit(TokenKind::Dot, ".", end);
    return end + 1;
  }

  void lemma_header(std::size_t start, std::string_view body, std::size_t w) {
    emit(TokenKind::Keyword, body.substr(0, w), start);
    std::size_t i = w;
    while (i < body.size() && is_space(body[i])) ++i;
    std::size_t j = i;
    while (j < body.size() && is_ident_char(body[j])) ++j;
    if (j > i) emit(TokenKind::Ident, body.substr(i, j - i), start + i);

    // First ':' outside parentheses that is not part of ":=".
    int depth = 0;
    std::size_t colon = std::string_view::npos;
    for (std::size_t k = j; k < body.size(); ++k) {
      const char c = body[k];
      if (c == '(' || c == '[' || c == '{') ++depth;
      if (c == ')' || c == ']' || c == '}') --depth;
      if (c == ':' && depth == 0 && (k + 1 == body.size() || body[k + 1] != '=')) {
        colon = k;
        break;
      }
    }
    auto text_token = [&](std::size_t from, std::size_t to) {
      auto piece = body.substr(from, to - from);
      auto trimmed = trim(piece);
      if (!trimmed.empty()) {
        emit(TokenKind::StatementText, trimmed,
             start + static_cast<std::size_t>(trimmed.data() - body.data()));
      }
    };
    if (colon == std::string_view::npos) {
      text_token(j, body.size());
      return;
    }
    text_token(j, colon);
    emit(TokenKind::Colon, ":", start + colon);
    text_token(colon + 1, body.size());
  }

  void tactic_sentence(std::size_t start, std::string_view body) {
    int depth = 0;
    std::size_t piece_start = 0;
    auto flush = [&](std::size_t to) {
      auto trimmed = trim(body.substr(piece_start, to - piece_start));
      if (!trimmed.empty()) {
        emit(TokenKind::TacticText, trimmed,
             start + static_cast<std::size_t>(trimmed.data() - body.data()));
      }
    };
    for (std::size_t k = 0; k < body.size(); ++k) {
      const char c = body[k];
      if (c == '(' || c == '[' || c == '{') ++depth;
      if (c == ')' || c == ']' || c == '}') --depth;
      if (c == ';' && depth == 0) {
        flush(k);
        emit(TokenKind::Semicolon, ";", start + k);
        piece_start = k + 1;
      }
    }
    flush(body.size());
  }

  std::string_view src_;
  LineIndex lines_;
  std::vector<ScriptToken> out_;
  bool in_proof_ = false;
  SourcePos proof_pos_;
};

}  // namespace

std::vector<ScriptToken> tokenize(std::string_view source) {
  return Tokenizer(source).run();
}

std::vector<ScriptToken> tokenize_tactic(std::string_view text, SourcePos pos) {
  std::vector<ScriptToken> out;
  std::size_t i = 0;
  auto emit = [&](TokenKind kind, std::size_t from, std::size_t len) {
    out.push_back({kind, std::string(text.substr(from, len)),
                   {pos.line, pos.column + static_cast<int>(from)}});
  };
  while (i < text.size()) {
    const char c = text[i];
    if (is_space(c)) {
      ++i;
    } else if (text.substr(i, 2) == "=>") {
      emit(TokenKind::ArrowIntro, i, 2);
      i += 2;
    } else if (c == ':' && text.substr(i, 2) != ":=") {
      emit(TokenKind::MoveColon, i, 1);
      ++i;
    } else if (c == '/') {
      std::size_t len = 1;
      if (text.substr(i, 3) == "//=") len = 3;
      else if (text.substr(i, 2) == "//" || text.substr(i, 2) == "/=") len = 2;
      emit(TokenKind::Slash, i, len);
      i += len;
    } else if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size()) {
        if (is_ident_char(text[j])) {
          ++j;
        } else if (text[j] == '.' && j + 1 < text.size() && is_ident_start(text[j + 1])) {
          ++j;  // qualified name
        } else {
          break;
        }
      }
      emit(TokenKind::Ident, i, j - i);
      i = j;
    } else if (text.substr(i, 2) == "->" || text.substr(i, 2) == "<-" ||
               text.substr(i, 2) == ":=") {
      emit(TokenKind::StatementText, i, 2);
      i += 2;
    } else {
      emit(TokenKind::StatementText, i, 1);  // punctuation
      ++i;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool is_punct(const ScriptToken& t, std::string_view text) {
  return t.kind == TokenKind::StatementText && t.text == text;
}

Arg reference_arg(const std::string& name, const std::vector<std::string>& bound) {
  Arg arg;
  arg.name = name;
  if (name.rfind("IH", 0) == 0) {
    arg.role = ArgRole::IH;
  } else if (std::find(bound.begin(), bound.end(), name) != bound.end()) {
    arg.role = ArgRole::Hyp;
  } else {
    arg.role = ArgRole::ExternalLemma;
  }
  return arg;
}

Arg plain_arg(const std::string& name, ArgRole role) {
  Arg arg;
  arg.name = name;
  arg.role = role;
  return arg;
}

void bind(std::vector<std::string>& bound, const std::string& name) {
  if (name == "_") return;
  if (std::find(bound.begin(), bound.end(), name) == bound.end()) bound.push_back(name);
}

/// Identifiers of an intro pattern starting at `i`; returns the names.
std::vector<std::string> pattern_names(const std::vector<ScriptToken>& toks,
                                       std::size_t i) {
  std::vector<std::string> names;
  for (; i < toks.size(); ++i) {
    if (toks[i].kind == TokenKind::Ident && toks[i].text != "_") {
      names.push_back(toks[i].text);
    }
  }
  return names;
}

/// Index one past a balanced bracket group opening at `i`.
std::size_t skip_group(const std::vector<ScriptToken>& toks, std::size_t i) {
  int depth = 0;
  for (; i < toks.size(); ++i) {
    if (is_punct(toks[i], "[") || is_punct(toks[i], "(") || is_punct(toks[i], "{")) ++depth;
    if (is_punct(toks[i], "]") || is_punct(toks[i], ")") || is_punct(toks[i], "}")) {
      if (--depth == 0) return i + 1;
    }
  }
  return toks.size();
}

/// First identifier inside a bracket group opening at `i`.
std::optional<std::string> group_head(const std::vector<ScriptToken>& toks,
                                      std::size_t i, std::size_t end) {
  for (++i; i < end; ++i) {
    if (toks[i].kind == TokenKind::Ident) return toks[i].text;
  }
  return std::nullopt;
}

bool references_lemmas(std::string_view head) {
  return head == "rewrite" || head == "apply" || head == "exact" || head == "eapply" ||
         head == "erewrite" || head == "setoid_rewrite";
}

}  // namespace

TacticApp parse_tactic(std::string_view text, std::vector<std::string>& bound) {
  auto toks = tokenize_tactic(text);
  std::size_t i = 0;
  if (i < toks.size() && toks[i].kind == TokenKind::Ident && toks[i].text == "by") ++i;

  TacticApp app;
  if (i >= toks.size()) {
    app.name = std::string(trim(text));
    return app;
  }
  if (toks[i].kind != TokenKind::Ident) {
    app.name = std::string(trim(text));
    return app;
  }
  const std::string head = toks[i].text;
  ++i;

  auto next_is = [&](TokenKind kind, std::string_view t = {}) {
    return i < toks.size() && toks[i].kind == kind && (t.empty() || toks[i].text == t);
  };
  // Names after a trailing "=>" are introduced but are not arguments.
  auto bind_tail = [&](std::size_t from) {
    for (const auto& name : pattern_names(toks, from)) bind(bound, name);
  };
  auto find_arrow = [&](std::size_t from) {
    for (std::size_t k = from; k < toks.size(); ++k) {
      if (toks[k].kind == TokenKind::ArrowIntro) return k;
    }
    return toks.size();
  };

  if (head == "move" && next_is(TokenKind::ArrowIntro)) {
    app.name = "move =>";
    for (const auto& name : pattern_names(toks, i + 1)) {
      app.args.push_back(plain_arg(name, ArgRole::None));
      bind(bound, name);
    }
    return app;
  }
  if (head == "intro" || head == "intros") {
    app.name = head;
    for (const auto& name : pattern_names(toks, i)) {
      app.args.push_back(plain_arg(name, ArgRole::None));
      bind(bound, name);
    }
    return app;
  }
  if (head == "move" && next_is(TokenKind::MoveColon)) {
    app.name = "move :";
    const auto arrow = find_arrow(i + 1);
    for (std::size_t k = i + 1; k < arrow; ++k) {
      if (toks[k].kind != TokenKind::Ident) continue;
      auto arg = reference_arg(toks[k].text, bound);
      if (arg.role == ArgRole::ExternalLemma) arg.role = ArgRole::Hyp;
      app.args.push_back(arg);
    }
    if (arrow < toks.size()) bind_tail(arrow + 1);
    return app;
  }
  if (head == "move" && next_is(TokenKind::Slash, "/")) {
    app.name = "move/";
    const auto arrow = find_arrow(i);
    for (std::size_t k = i; k < arrow; ++k) {
      if (toks[k].kind == TokenKind::Ident) app.args.push_back(reference_arg(toks[k].text, bound));
    }
    if (arrow < toks.size()) bind_tail(arrow + 1);
    return app;
  }

  app.name = head;
  if ((head == "elim" || head == "case") && next_is(TokenKind::MoveColon)) {
    const auto arrow = find_arrow(i + 1);
    for (std::size_t k = i + 1; k < arrow; ++k) {
      if (toks[k].kind != TokenKind::Ident) continue;
      auto arg = reference_arg(toks[k].text, bound);
      if (arg.role == ArgRole::ExternalLemma) arg.role = ArgRole::Hyp;
      app.args.push_back(arg);
    }
    if (arrow < toks.size()) bind_tail(arrow + 1);
    return app;
  }

  if (head == "rewrite" || head == "erewrite" || head == "setoid_rewrite") {
    while (i < toks.size()) {
      const auto& t = toks[i];
      if (t.kind == TokenKind::ArrowIntro) {
        bind_tail(i + 1);
        break;
      }
      if (t.kind == TokenKind::Ident && t.text == "in") break;
      if (is_punct(t, "[") || is_punct(t, "{")) {
        i = skip_group(toks, i);  // occurrence or pattern selector
        continue;
      }
      if (is_punct(t, "(")) {
        const auto end = skip_group(toks, i);
        if (auto name = group_head(toks, i, end)) app.args.push_back(reference_arg(*name, bound));
        i = end;
        continue;
      }
      if (t.kind == TokenKind::Ident) app.args.push_back(reference_arg(t.text, bound));
      ++i;  // modifiers: - ! ? digits // /= //= -> <-, and "/" before an unfold
    }
    return app;
  }

  const bool lemma_refs = references_lemmas(head);
  while (i < toks.size()) {
    const auto& t = toks[i];
    if (t.kind == TokenKind::ArrowIntro) {
      bind_tail(i + 1);
      break;
    }
    if (t.kind == TokenKind::Ident && (t.text == "as" || t.text == "eqn")) {
      bind_tail(i + 1);
      break;
    }
    if (t.kind == TokenKind::Ident &&
        (t.text == "in" || t.text == "with" || t.text == "using" || t.text == "at")) {
      break;
    }
    if (is_punct(t, "(") || is_punct(t, "[")) {
      const auto end = skip_group(toks, i);
      if (auto name = group_head(toks, i, end)) {
        app.args.push_back(lemma_refs ? reference_arg(*name, bound)
                                      : plain_arg(*name, ArgRole::None));
      }
      i = end;
      continue;
    }
    if (t.kind == TokenKind::Ident) {
      app.args.push_back(lemma_refs ? reference_arg(t.text, bound)
                                    : plain_arg(t.text, ArgRole::None));
    }
    ++i;
  }
  return app;
}

std::vector<ScriptProof> parse_script(std::string_view source) {
  const auto toks = tokenize(source);
  std::vector<ScriptProof> proofs;
  std::size_t i = 0;
  const auto n = toks.size();

  auto expect_dot = [&]() {
    while (i < n && toks[i].kind != TokenKind::Dot) ++i;
    if (i < n) ++i;
  };
  auto here = [&]() { return i < n ? toks[i].pos : (n ? toks[n - 1].pos : SourcePos{}); };

  while (i < n) {
    const auto& t = toks[i];
    if (t.kind == TokenKind::StatementText) {
      expect_dot();
      continue;
    }
    if (t.kind != TokenKind::Keyword || !one_of(t.text, kLemmaWords)) {
      throw Error(ErrorCode::Parse, "expected 'Lemma' but found '" + t.text + "'", t.pos);
    }
    ScriptProof proof;
    proof.pos = t.pos;
    ++i;
    if (i >= n || toks[i].kind != TokenKind::Ident) {
      throw Error(ErrorCode::Parse, "expected a lemma name", here());
    }
    proof.lemma_name = toks[i++].text;

    std::string binders;
    if (i < n && toks[i].kind == TokenKind::StatementText) binders = toks[i++].text;
    if (i >= n || toks[i].kind != TokenKind::Colon) {
      throw Error(ErrorCode::MissingStatement,
                  "lemma '" + proof.lemma_name + "' has no ': statement'", proof.pos);
    }
    ++i;
    if (i >= n || toks[i].kind != TokenKind::StatementText) {
      throw Error(ErrorCode::MissingStatement,
                  "lemma '" + proof.lemma_name + "' has an empty statement", proof.pos);
    }
    proof.statement = binders.empty() ? toks[i].text : binders + " : " + toks[i].text;
    ++i;
    if (i >= n || toks[i].kind != TokenKind::Dot) {
      throw Error(ErrorCode::Parse, "expected '.' after the statement", here());
    }
    ++i;
    if (i >= n || toks[i].kind != TokenKind::Keyword || toks[i].text != "Proof") {
      throw Error(ErrorCode::Parse, "expected 'Proof.'", here());
    }
    expect_dot();

    std::vector<std::string> bound;
    bool closed = false;
    while (i < n && !closed) {
      const auto& s = toks[i];
      if (s.kind == TokenKind::Bullet) {
        ++i;
      } else if (s.kind == TokenKind::Keyword) {
        proof.complete = s.text == "Qed" || s.text == "Defined";
        closed = true;
        expect_dot();
      } else if (s.kind == TokenKind::TacticText) {
        std::vector<TacticApp> sentence;
        std::string text;
        while (i < n && toks[i].kind != TokenKind::Dot) {
          if (toks[i].kind == TokenKind::TacticText) {
            sentence.push_back(parse_tactic(toks[i].text, bound));
            if (!text.empty()) text += "; ";
            text += toks[i].text;
          } else if (toks[i].kind != TokenKind::Semicolon) {
            throw Error(ErrorCode::Parse, "unexpected '" + toks[i].text + "' in tactic",
                        toks[i].pos);
          }
          ++i;
        }
        ++i;
        proof.sentences.push_back(std::move(sentence));
        proof.sentence_texts.push_back(std::move(text));
      } else {
        throw Error(ErrorCode::Parse, "unexpected '" + s.text + "' in proof", s.pos);
      }
    }
    if (!closed) {
      throw Error(ErrorCode::UnterminatedProof, "no 'Qed.' before end of input", proof.pos);
    }
    if (proof.sentences.empty()) {
      proof.warnings.push_back("incomplete derivation: empty proof body");
    }
    proofs.push_back(std::move(proof));
  }
  return proofs;
}

// ---------------------------------------------------------------------------
// Trace format

namespace {

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

[[noreturn]] void format_error(int line, const std::string& reason) {
  throw Error(ErrorCode::Format, reason, SourcePos{line, 1});
}

std::optional<int> parse_count(std::string_view text, int line) {
  if (text == "?") return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    format_error(line, "invalid subgoal count '" + std::string(text) + "'");
  }
  if (value < 0) format_error(line, "negative subgoal count " + std::to_string(value));
  return value;
}

Arg parse_arg_field(const std::string& text, int line) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() < 2 || parts.size() > 3) {
    format_error(line, "argument '" + text + "' is not <type>:<kind>[:<name>]");
  }
  Arg arg;
  if (parts[0] != "?") arg.type = parts[0];
  const auto& kind = parts[1];
  if (kind == "none") arg.role = ArgRole::None;
  else if (kind == "hyp") arg.role = ArgRole::Hyp;
  else if (kind == "ih") arg.role = ArgRole::IH;
  else if (kind == "lemma") arg.role = ArgRole::ExternalLemma;
  else format_error(line, "unknown argument kind '" + kind + "'");
  if (parts.size() == 3) arg.name = parts[2];
  if (arg.role == ArgRole::ExternalLemma && arg.name.empty()) {
    format_error(line, "lemma argument without a lemma name");
  }
  return arg;
}

class TreeReader {
 public:
  TreeReader(std::string_view text, int line) : text_(text), line_(line) {}

  TreeNode read() {
    auto node = node_at(1);
    skip();
    if (pos_ != text_.size()) format_error(line_, "trailing text after proof tree");
    return node;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && (is_space(text_[pos_]) || text_[pos_] == ',')) ++pos_;
  }

  TreeNode node_at(int depth) {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != '(') format_error(line_, "expected '(' in proof tree");
    ++pos_;
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) format_error(line_, "expected a step index in proof tree");
    TreeNode node;
    node.depth = depth;
    node.step = std::stoi(std::string(text_.substr(start, pos_ - start)));
    skip();
    if (text_.substr(pos_, 6) == "closed") {
      node.closed = true;
      pos_ += 6;
    }
    while (true) {
      skip();
      if (pos_ >= text_.size()) format_error(line_, "unbalanced proof tree");
      if (text_[pos_] == ')') {
        ++pos_;
        return node;
      }
      node.children.push_back(node_at(depth + 1));
    }
  }

  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

void write_node(std::ostream& out, const TreeNode& node) {
  out << '(' << node.step;
  if (node.closed) out << " closed";
  for (const auto& child : node.children) {
    out << ' ';
    write_node(out, child);
  }
  out << ')';
}

std::string arg_field(const Arg& arg) {
  std::string out = arg.type ? *arg.type : "?";
  switch (arg.role) {
    case ArgRole::None: out += ":none"; break;
    case ArgRole::Hyp: out += ":hyp"; break;
    case ArgRole::IH: out += ":ih"; break;
    case ArgRole::ExternalLemma: out += ":lemma"; break;
  }
  if (!arg.name.empty()) out += ":" + arg.name;
  return out;
}

std::string one_line(const std::string& text) {
  std::string out = text;
  std::replace(out.begin(), out.end(), '\n', ' ');
  std::replace(out.begin(), out.end(), '\r', ' ');
  return out;
}

}  // namespace

TraceLibrary read_trace_text(std::string_view text) {
  TraceLibrary library;
  std::set<std::string> names;
  std::optional<ProofTrace> current;
  int current_line = 0;
  std::string tree_text;
  int tree_line = 0;

  auto finish = [&](bool complete, int line) {
    if (!current) format_error(line, "'qed' without 'lemma'");
    current->complete = complete;
    if (!tree_text.empty()) current->tree = TreeReader(tree_text, tree_line).read();
    const auto violations = validate_trace(*current);
    if (!violations.empty()) {
      format_error(current_line, "lemma '" + current->lemma_name + "': " + violations.front());
    }
    library.traces.push_back(std::move(*current));
    current.reset();
    tree_text.clear();
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto space = line.find_first_of(" \t");
    const auto key = line.substr(0, space);
    const auto rest = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));

    if (key == "library") {
      if (rest.empty()) format_error(line_no, "library without a name");
      library.name = std::string(rest);
    } else if (key == "lemma") {
      if (current) format_error(line_no, "lemma '" + current->lemma_name + "' is not terminated");
      if (rest.empty()) format_error(line_no, "lemma without a name");
      const std::string name(rest);
      if (!names.insert(name).second) {
        throw Error(ErrorCode::DuplicateLemma, "duplicate lemma '" + name + "'",
                    SourcePos{line_no, 1});
      }
      current = ProofTrace{};
      current->lemma_name = name;
      current->library = library.name;
      current_line = line_no;
    } else if (!current) {
      format_error(line_no, "'" + std::string(key) + "' outside a lemma block");
    } else if (key == "statement") {
      current->statement = std::string(rest);
    } else if (key == "step") {
      ProofStep step;
      bool saw_top = false, saw_subgoals = false;
      for (const auto& field : split_ws(rest)) {
        if (field.rfind("top=", 0) == 0) {
          const auto value = field.substr(4);
          if (value.empty()) format_error(line_no, "empty top symbol");
          if (value != "?") step.goal_top_symbol = value;
          saw_top = true;
        } else if (field.rfind("subgoals=", 0) == 0) {
          step.n_subgoals_after = parse_count(field.substr(9), line_no);
          saw_subgoals = true;
        } else {
          format_error(line_no, "unknown step field '" + field + "'");
        }
      }
      if (!saw_top || !saw_subgoals) format_error(line_no, "step needs top= and subgoals=");
      current->steps.push_back(std::move(step));
    } else if (key == "tactic") {
      if (current->steps.empty()) format_error(line_no, "tactic before any step");
      const auto words = split_ws(rest);
      TacticApp app;
      std::size_t k = 0;
      for (; k < words.size() && words[k] != "arg"; ++k) {
        if (!app.name.empty()) app.name += ' ';
        app.name += words[k];
      }
      if (app.name.empty()) format_error(line_no, "tactic without a name");
      while (k < words.size()) {
        if (words[k] != "arg" || k + 1 >= words.size()) {
          format_error(line_no, "expected 'arg <type>:<kind>'");
        }
        app.args.push_back(parse_arg_field(words[k + 1], line_no));
        k += 2;
      }
      current->steps.back().tactics.push_back(std::move(app));
    } else if (key == "tree") {
      if (tree_text.empty()) tree_line = line_no;
      tree_text += ' ';
      tree_text += rest;
    } else if (key == "qed") {
      finish(true, line_no);
    } else if (key == "admitted") {
      finish(false, line_no);
    } else {
      format_error(line_no, "unknown directive '" + std::string(key) + "'");
    }
  }
  if (current) format_error(current_line, "lemma '" + current->lemma_name + "' is not terminated");
  return library;
}

TraceLibrary read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return read_trace_text(buffer.str());
}

std::string write_trace_text(const TraceLibrary& library) {
  std::ostringstream out;
  out << "library " << (library.name.empty() ? "unnamed" : library.name) << "\n";
  for (const auto& trace : library.traces) {
    out << "\nlemma " << trace.lemma_name << "\n";
    out << "statement " << one_line(trace.statement) << "\n";
    for (const auto& step : trace.steps) {
      out << "step top=" << step.goal_top_symbol.value_or("?") << " subgoals=";
      if (step.n_subgoals_after) out << *step.n_subgoals_after;
      else out << '?';
      out << "\n";
      for (const auto& tactic : step.tactics) {
        out << "  tactic " << tactic.name;
        for (const auto& arg : tactic.args) out << " arg " << arg_field(arg);
        out << "\n";
      }
    }
    if (trace.tree) {
      out << "tree ";
      write_node(out, *trace.tree);
      out << "\n";
    }
    out << (trace.complete ? "qed" : "admitted") << "\n";
  }
  return out.str();
}

void write_trace_file(const TraceLibrary& library, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << write_trace_text(library);
}

ProofTrace merge_script_into_trace(const ScriptProof& script,
                                   const std::optional<ProofTrace>& partial) {
  if (partial && partial->lemma_name != script.lemma_name) {
    throw Error(ErrorCode::NameMismatch, "script '" + script.lemma_name +
                                             "' does not match trace '" +
                                             partial->lemma_name + "'");
  }
  ProofTrace trace;
  trace.lemma_name = script.lemma_name;
  trace.statement = script.statement;
  trace.complete = script.complete;
  if (partial) {
    trace.library = partial->library;
    trace.tree = partial->tree;
  }
  for (std::size_t i = 0; i < script.sentences.size(); ++i) {
    ProofStep step;
    step.tactics = script.sentences[i];
    if (partial && i < partial->steps.size()) {
      const auto& known = partial->steps[i];
      step.goal_top_symbol = known.goal_top_symbol;
      step.n_subgoals_after = known.n_subgoals_after;
      for (std::size_t j = 0; j < step.tactics.size() && j < known.tactics.size(); ++j) {
        if (step.tactics[j].name == known.tactics[j].name) {
          step.tactics[j].args = known.tactics[j].args;
        }
      }
    }
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

std::string render_script(const ProofTrace& trace) {
  std::ostringstream out;
  out << "Lemma " << trace.lemma_name << " : " << trace.statement << ".\nProof.\n";
  for (const auto& step : trace.steps) {
    out << "  ";
    for (std::size_t i = 0; i < step.tactics.size(); ++i) {
      const auto& tactic = step.tactics[i];
      if (i) out << "; ";
      out << tactic.name;
      for (std::size_t a = 0; a < tactic.args.size(); ++a) {
        const auto& name = tactic.args[a].name;
        if (name.empty()) continue;
        if (!(tactic.name == "move/" && a == 0)) out << ' ';
        out << name;
      }
    }
    out << ".\n";
  }
  out << (trace.complete ? "Qed." : "Admitted.") << "\n";
  return out.str();
}

}  // namespace proofminer
