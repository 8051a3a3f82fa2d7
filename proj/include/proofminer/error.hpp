#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace proofminer {

enum class ErrorCode {
  Usage,
  Parse,
  UnterminatedProof,
  MissingStatement,
  Format,
  DuplicateLemma,
  NameMismatch,
  CountOverflow,
  DimensionMismatch,
  UnknownSymbol,
  TooFewPoints,
  KTooLarge,
  DegenerateComponent,
  SingleCluster,
  EmptyCluster,
  CorpusTooSmall,
  OutOfRange,
  UnknownLemma,
  IncompleteProof,
  Schema,
  Io,
};

/// Machine-readable name used by the CLI diagnostics and the service.
std::string_view error_code_name(ErrorCode code);

struct SourcePos {
  int line = 1;
  int column = 1;
  bool operator==(const SourcePos&) const = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<SourcePos> pos = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::optional<SourcePos>& position() const noexcept { return pos_; }

 private:
  ErrorCode code_;
  std::optional<SourcePos> pos_;
};

}  // namespace proofminer
