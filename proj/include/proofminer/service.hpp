#pragma once

// Corpus-level operations shared by the command line and the local HTTP
// service, and the service itself.

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proofminer/io.hpp"
#include "proofminer/pipeline.hpp"

namespace proofminer {

/// A partial proof given either in the trace format or as script text. The
/// last proof in the text is used.
ProofTrace load_partial(std::string_view text);

/// Encodes `partial` against the corpus symbols and clusters it with the
/// corpus. An empty corpus gives an empty report and no suggestion.
GoalClustering suggest_partial(const Corpus& corpus, const ProofTrace& partial,
                               const EngineConfig& config);

struct Response {
  int status = 200;
  std::string body;  // JSON document
};

class Service {
 public:
  Service(std::vector<std::filesystem::path> dirs, EngineConfig defaults = {});
  Service(Corpus corpus, EngineConfig defaults = {});

  /// Routes one request; never throws.
  Response handle(std::string_view method, std::string_view path, std::string_view body);

  Response corpus_info() const;
  Response cluster(std::string_view body) const;
  Response suggest(std::string_view body) const;
  Response lemma(std::string_view name) const;
  /// Re-imports the export directories and swaps the corpus in one step.
  Response reload();

  /// Blocks serving HTTP until stop() is called.
  bool serve(const std::string& host, int port);
  void stop();

  std::shared_ptr<const Corpus> corpus() const;

 private:
  std::vector<std::filesystem::path> dirs_;
  EngineConfig defaults_;
  mutable std::mutex mutex_;
  std::shared_ptr<const Corpus> corpus_;
  std::shared_ptr<void> server_;
};

}  // namespace proofminer
