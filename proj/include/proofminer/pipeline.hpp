#pragma once

// Repeated clustering with proximity and frequency filtering, general and
// goal-dependent modes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "proofminer/features.hpp"
#include "proofminer/mlcore.hpp"
#include "proofminer/model.hpp"

namespace proofminer {

/// floor(l / (11 - g)) clamped to at least 2. Throws CorpusTooSmall for l < 6.
int granularity_to_k(int granularity, std::size_t corpus_size);

/// Percentage a lemma set must reach to be reported: 5, 15 or 30.
double frequency_threshold(int frequency_param);

struct RunOutcome {
  int run = 0;
  std::vector<std::vector<std::string>> clusters;  // sorted lemma sets that passed
  std::vector<double> mean_silhouette;
};

/// Standardized and, when wide enough, PCA-reduced data.
Dataset prepare_data(const std::vector<FeatureVector>& vectors, const EngineConfig& config);

RunOutcome run_once(const Dataset& prepared, int k, const EngineConfig& config, int run);

ClusterReport cluster_corpus(const std::vector<FeatureVector>& vectors, const EngineConfig& config);

/// Same as cluster_corpus, also returning every run.
ClusterReport cluster_corpus(const std::vector<FeatureVector>& vectors, const EngineConfig& config,
                             std::vector<RunOutcome>* runs);

struct Suggestion {
  std::vector<std::string> lemmas;  // excludes the current lemma
  double frequency_pct = 0.0;

  bool operator==(const Suggestion&) const = default;
};

/// Highest-frequency reported cluster containing `lemma_name`.
std::optional<Suggestion> suggestion_from_report(const ClusterReport& report,
                                                 const std::string& lemma_name);

struct GoalClustering {
  ClusterReport report;
  std::optional<Suggestion> suggestion;
};

/// Corpus vectors sharing the current lemma's name are replaced by `current`.
GoalClustering cluster_with_goal(const std::vector<FeatureVector>& vectors,
                                 const FeatureVector& current, const EngineConfig& config);

std::optional<Suggestion> suggest_for_goal(const std::vector<FeatureVector>& vectors,
                                           const FeatureVector& current,
                                           const EngineConfig& config);

/// Throws UnknownLemma if either name is missing from `traces`.
Agreement agreement_report(const std::vector<ProofTrace>& traces, const std::string& lemma_a,
                           const std::string& lemma_b, Level level,
                           const TacticUniverse& universe);

}  // namespace proofminer
