#include "proofminer/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace proofminer {

int granularity_to_k(int granularity, std::size_t corpus_size) {
  if (granularity < 1 || granularity > 5) {
    throw Error(ErrorCode::OutOfRange, "granularity must be in 1..5");
  }
  if (corpus_size < 6) {
    throw Error(ErrorCode::CorpusTooSmall,
                "corpus has " + std::to_string(corpus_size) + " lemmas, at least 6 needed");
  }
  const auto k = static_cast<int>(corpus_size / static_cast<std::size_t>(11 - granularity));
  return std::max(k, 2);
}

double frequency_threshold(int frequency_param) {
  switch (frequency_param) {
    case 1: return 5.0;
    case 2: return 15.0;
    case 3: return 30.0;
    default: throw Error(ErrorCode::OutOfRange, "frequency must be in 1..3");
  }
}

Dataset prepare_data(const std::vector<FeatureVector>& vectors, const EngineConfig& config) {
  for (const auto& v : vectors) {
    if (v.level != vectors.front().level) {
      throw Error(ErrorCode::DimensionMismatch, "vectors mix proof levels");
    }
  }
  auto data = standardize(Dataset::from_vectors(vectors)).data;
  if (config.use_pca && static_cast<std::size_t>(data.dims()) > config.pca_min_dim) {
    data = pca_fit_transform(data, config.variance_target).data;
  }
  return data;
}

namespace {

Partition partition_for(const Dataset& data, int k, const EngineConfig& config,
                        std::uint64_t seed) {
  switch (config.algorithm) {
    case Algorithm::KMeans: return kmeans(data, k, seed).partition;
    case Algorithm::GaussianMixture: return gmm_em(data, k, seed).partition;
    case Algorithm::FarthestFirst: return farthest_first(data, k, seed).partition;
  }
  throw Error(ErrorCode::OutOfRange, "unknown algorithm");
}

}  // namespace

RunOutcome run_once(const Dataset& prepared, int k, const EngineConfig& config, int run) {
  RunOutcome out;
  out.run = run;
  const auto seed = config.master_seed + static_cast<std::uint64_t>(run);
  Partition partition;
  try {
    partition = compact(partition_for(prepared, k, config, seed));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateComponent) return out;
    throw;
  }
  if (partition.k < 2) return out;
  const auto scores = silhouette(prepared, partition);

  std::vector<std::vector<std::string>> members(static_cast<std::size_t>(partition.k));
  for (std::size_t i = 0; i < partition.assignment.size(); ++i) {
    members[static_cast<std::size_t>(partition.assignment[i])].push_back(prepared.labels[i]);
  }
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (scores.cluster_means[c] < config.proximity_threshold) continue;
    std::sort(members[c].begin(), members[c].end());
    out.clusters.push_back(std::move(members[c]));
    out.mean_silhouette.push_back(scores.cluster_means[c]);
  }
  return out;
}

ClusterReport cluster_corpus(const std::vector<FeatureVector>& vectors,
                             const EngineConfig& config) {
  return cluster_corpus(vectors, config, nullptr);
}

ClusterReport cluster_corpus(const std::vector<FeatureVector>& vectors, const EngineConfig& config,
                             std::vector<RunOutcome>* runs) {
  config.validate();
  const int k = granularity_to_k(config.granularity, vectors.size());
  const double threshold = frequency_threshold(config.frequency_param);
  const Dataset data = prepare_data(vectors, config);

  std::vector<RunOutcome> outcomes(static_cast<std::size_t>(config.runs));
  unsigned workers = config.threads ? config.threads : std::thread::hardware_concurrency();
  workers = std::clamp(workers, 1u, static_cast<unsigned>(config.runs));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int run = next++; run < config.runs; run = next++) {
      try {
        outcomes[static_cast<std::size_t>(run)] = run_once(data, k, config, run);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = config.runs;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  std::map<std::vector<std::string>, int> counts;
  for (const auto& outcome : outcomes) {
    for (const auto& cluster : outcome.clusters) ++counts[cluster];
  }

  ClusterReport report;
  report.config = config;
  report.n_clusters = static_cast<std::size_t>(k);
  report.corpus_size = vectors.size();
  for (const auto& [lemmas, count] : counts) {
    const double pct = 100.0 * count / config.runs;
    if (pct >= threshold) report.entries.push_back({lemmas, pct});
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const ClusterEntry& a, const ClusterEntry& b) {
                     return a.frequency_pct > b.frequency_pct;
                   });
  if (runs) *runs = std::move(outcomes);
  return report;
}

std::optional<Suggestion> suggestion_from_report(const ClusterReport& report,
                                                 const std::string& lemma_name) {
  for (const auto& entry : report.entries) {
    if (!std::binary_search(entry.lemmas.begin(), entry.lemmas.end(), lemma_name)) continue;
    Suggestion s;
    s.frequency_pct = entry.frequency_pct;
    for (const auto& lemma : entry.lemmas) {
      if (lemma != lemma_name) s.lemmas.push_back(lemma);
    }
    if (!s.lemmas.empty()) return s;
  }
  return std::nullopt;
}

GoalClustering cluster_with_goal(const std::vector<FeatureVector>& vectors,
                                 const FeatureVector& current, const EngineConfig& config) {
  std::vector<FeatureVector> points;
  points.reserve(vectors.size() + 1);
  for (const auto& v : vectors) {
    if (v.lemma_name != current.lemma_name) points.push_back(v);
  }
  points.push_back(current);
  GoalClustering out;
  out.report = cluster_corpus(points, config);
  out.suggestion = suggestion_from_report(out.report, current.lemma_name);
  return out;
}

std::optional<Suggestion> suggest_for_goal(const std::vector<FeatureVector>& vectors,
                                           const FeatureVector& current,
                                           const EngineConfig& config) {
  return cluster_with_goal(vectors, current, config).suggestion;
}

Agreement agreement_report(const std::vector<ProofTrace>& traces, const std::string& lemma_a,
                           const std::string& lemma_b, Level level,
                           const TacticUniverse& universe) {
  auto find = [&](const std::string& name) -> const ProofTrace& {
    for (const auto& t : traces) {
      if (t.lemma_name == name) return t;
    }
    throw Error(ErrorCode::UnknownLemma, "unknown lemma '" + name + "'");
  };
  const auto& a = find(lemma_a);
  const auto& b = find(lemma_b);
  return agreement(extract_table(a, level, universe), extract_table(b, level, universe));
}

}  // namespace proofminer
