// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "proofminer/io.hpp"
#include "proofminer/pipeline.hpp"
#include "proofminer/service.hpp"

namespace pm = proofminer;

namespace {

constexpr std::uint64_t kSeed = 7;

struct Outcome {
  bool ok = true;
  std::string detail;

  void expect(bool condition, const std::string& what) {
    if (condition) return;
    ok = false;
    detail += (detail.empty() ? "" : "; ") + what;
  }
};

int failures = 0;

void criterion(const std::string& name, double limit_ms, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (limit_ms > 0 && ms >= limit_ms) {
    out.expect(false, "took " + std::to_string(ms) + " ms, limit " + std::to_string(limit_ms) + " ms");
  }
  if (!out.ok) ++failures;
  std::ostringstream line;
  line << (out.ok ? "PASS" : "FAIL") << "  " << name << "  (" << std::fixed;
  line.precision(1);
  line << ms << " ms)";
  if (!out.detail.empty()) line << "  " << out.detail;
  std::cout << line.str() << std::endl;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : " ") + s;
  return out;
}

bool has_all(const std::vector<std::string>& lemmas, const std::vector<std::string>& wanted) {
  return std::all_of(wanted.begin(), wanted.end(), [&](const std::string& w) {
    return std::binary_search(lemmas.begin(), lemmas.end(), w);
  });
}

bool has_any(const std::vector<std::string>& lemmas, const std::vector<std::string>& unwanted) {
  return std::any_of(unwanted.begin(), unwanted.end(), [&](const std::string& w) {
    return std::binary_search(lemmas.begin(), lemmas.end(), w);
  });
}

pm::EngineConfig goal_kmeans(int g) {
  pm::EngineConfig c;
  c.algorithm = pm::Algorithm::KMeans;
  c.level = pm::Level::Goal;
  c.granularity = g;
  c.frequency_param = 1;
  c.runs = 200;
  c.master_seed = kSeed;
  return c;
}

// Property suites ----------------------------------------------------------

void kmeans_monotone(Outcome& out, const pm::Dataset& data) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto r = pm::kmeans(data, 25, seed);
    for (std::size_t i = 1; i < r.inertia_trace.size(); ++i) {
      if (r.inertia_trace[i] > r.inertia_trace[i - 1]) {
        out.expect(false, "k-means inertia rose at seed " + std::to_string(seed));
        return;
      }
    }
  }
}

void gmm_monotone(Outcome& out, const pm::Dataset& data) {
  int fitted = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    pm::GmmResult r;
    try {
      r = pm::gmm_em(data, 10, seed);
    } catch (const pm::Error& e) {
      if (e.code() == pm::ErrorCode::DegenerateComponent) continue;
      throw;
    }
    ++fitted;
    for (std::size_t i = 1; i < r.ll_trace.size(); ++i) {
      if (std::find(r.reseeded_at.begin(), r.reseeded_at.end(), static_cast<int>(i) - 1) !=
          r.reseeded_at.end()) {
        continue;
      }
      if (r.ll_trace[i] < r.ll_trace[i - 1] - 1e-9) {
        out.expect(false, "mixture log-likelihood fell by " +
                              std::to_string(r.ll_trace[i - 1] - r.ll_trace[i]) + " at seed " +
                              std::to_string(seed));
        return;
      }
    }
  }
  out.expect(fitted > 0, "no mixture fit completed");
}

void pca_orthonormal(Outcome& out, const pm::Dataset& data) {
  const auto pca = pm::pca_fit_transform(data, 0.95);
  const Eigen::MatrixXd gram = pca.model.components.transpose() * pca.model.components;
  const double error = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  out.expect(error <= 1e-8, "PCA components off orthonormal by " + std::to_string(error));
}

void silhouette_oracle(Outcome& out, const pm::Dataset& data) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto partition = pm::compact(pm::kmeans(data, 25, seed).partition);
    const auto scores = pm::silhouette(data, partition).scores;
    const auto expected = oracle::silhouette(data.points, partition.assignment);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (std::abs(scores[i] - expected[i]) > 1e-9) {
        out.expect(false, "silhouette differs from the oracle at point " + std::to_string(i));
        return;
      }
    }
  }
}

void threshold_subsets(Outcome& out) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto corpus = oracle::random_corpus(30 + static_cast<int>(seed % 20), seed);
    pm::EngineConfig c;
    c.granularity = static_cast<int>(seed % 5) + 1;
    c.runs = 40;
    c.master_seed = seed;
    std::vector<pm::ClusterReport> reports;
    for (int f = 1; f <= 3; ++f) {
      c.frequency_param = f;
      reports.push_back(pm::cluster_corpus(corpus, c));
    }
    for (int f = 1; f < 3; ++f) {
      for (const auto& e : reports[static_cast<std::size_t>(f)].entries) {
        const auto& wider = reports[static_cast<std::size_t>(f - 1)].entries;
        if (std::find(wider.begin(), wider.end(), e) == wider.end()) {
          out.expect(false, "f=" + std::to_string(f + 1) + " not within f=" + std::to_string(f) +
                                " for corpus " + std::to_string(seed));
          return;
        }
      }
    }
  }
}

void round_trips(Outcome& out, const pm::Corpus& corpus, const pm::ClusterReport& report) {
  const auto xml = pm::cluster_xml_text(report);
  const auto back = pm::parse_cluster_xml(xml);
  out.expect(back.entries == report.entries, "cluster XML entries changed in a round trip");
  out.expect(pm::cluster_xml_text(back) == xml, "cluster XML text changed in a round trip");

  for (auto level : {pm::Level::Goal, pm::Level::Tactic, pm::Level::Tree}) {
    const auto& vectors = corpus.vectors(level);
    const auto arff = pm::parse_arff(pm::arff_text(vectors, corpus.name));
    out.expect(pm::arff_vectors(arff, level) == vectors,
               "ARFF round trip changed " + std::string(pm::level_name(level)) + " vectors");
    const auto rows = pm::parse_csv(pm::csv_text(vectors));
    bool close = rows.size() == vectors.size();
    for (std::size_t i = 0; close && i < rows.size(); ++i) {
      close = rows[i].size() == vectors[i].values.size();
      for (std::size_t j = 0; close && j < rows[i].size(); ++j) {
        close = std::abs(rows[i][j] - vectors[i].values[j]) <= 1e-12;
      }
    }
    out.expect(close, "CSV round trip moved " + std::string(pm::level_name(level)) + " values");
  }
}

void determinism(Outcome& out, const pm::Corpus& corpus) {
  auto c = goal_kmeans(3);
  c.threads = 1;
  const auto first = pm::cluster_xml_text(pm::cluster_corpus(corpus.goal, c));
  c.threads = 0;
  const auto second = pm::cluster_xml_text(pm::cluster_corpus(corpus.goal, c));
  out.expect(first == second, "two runs with the same seed differ");
}

}  // namespace

int main() {
  const auto initial_library = oracle::fixture_library("Initial");
  const auto bigop_library = oracle::fixture_library("bigop");
  const auto series_library = oracle::fixture_library("series");
  const auto ssr = pm::TacticUniverse::ssreflect();

  criterion("granularity formula", 1.0, [] {
    Outcome out;
    const std::vector<int> expected{20, 22, 25, 29, 34};
    for (int g = 1; g <= 5; ++g) {
      const int k = pm::granularity_to_k(g, 205);
      out.expect(k == expected[static_cast<std::size_t>(g - 1)],
                 "l=205 g=" + std::to_string(g) + " gave " + std::to_string(k));
    }
    out.expect(pm::granularity_to_k(3, 70) == 8, "l=70 g=3 is not 8");
    return out;
  });

  criterion("frequency thresholds", 0, [] {
    Outcome out;
    out.expect(pm::frequency_threshold(1) == 5.0, "f=1 is not 5%");
    out.expect(pm::frequency_threshold(2) == 15.0, "f=2 is not 15%");
    out.expect(pm::frequency_threshold(3) == 30.0, "f=3 is not 30%");
    return out;
  });

  criterion("vector shapes", 0, [&] {
    Outcome out;
    const auto corpus = pm::build_corpus(bigop_library, pm::TacticMode::SSReflect);
    auto check = [&](const std::vector<pm::FeatureVector>& vectors, std::size_t n, const char* level) {
      for (const auto& v : vectors) {
        if (v.values.size() != n) {
          out.expect(false, std::string(level) + " vector of " + v.lemma_name + " has " +
                                std::to_string(v.values.size()) + " entries");
          return;
        }
      }
    };
    check(corpus.goal, 30, "goal");
    check(corpus.tree, 40, "tree");
    check(corpus.tactic, 30, "tactic");
    out.expect(pm::vector_length(pm::Level::Goal, ssr) == 30, "goal length");
    out.expect(pm::vector_length(pm::Level::Tree, ssr) == 40, "tree length");
    out.expect(pm::vector_length(pm::Level::Tactic, ssr) == 30, "tactic length");
    return out;
  });

  criterion("branching codes", 0, [&] {
    Outcome out;
    out.expect(pm::encode_branching({1, {2}}) == 12, "(1,[2]) is not 12");
    out.expect(pm::encode_branching({2, {0, 1}}) == 201, "(2,[0,1]) is not 201");
    out.expect(pm::encode_branching({3, {0}}) == 30, "(3,[0]) is not 30");
    const auto table = pm::extract_tree_table(oracle::find_trace(series_library, "sum_first_n"), ssr);
    const auto col = table.col_index("branching");
    std::vector<std::string> codes;
    for (std::size_t r = 0; r < 3; ++r) codes.push_back(pm::cell_to_string(table.at(r, col)));
    out.expect(codes == std::vector<std::string>{"12", "201", "30"},
               "sum_first_n tree codes are " + join(codes));
    return out;
  });

  criterion("agreement ordering", 1000.0, [&] {
    Outcome out;
    std::ostringstream detail;
    for (auto level : {pm::Level::Goal, pm::Level::Tactic, pm::Level::Tree}) {
      const auto near = pm::agreement_report(series_library.traces, "sum_first_n", "fact_prod", level, ssr);
      const auto far =
          pm::agreement_report(series_library.traces, "sum_first_n", "sum_first_n_odd", level, ssr);
      detail << (detail.tellp() ? ", " : "") << pm::level_name(level) << " " << near.matching << "/"
             << near.total << " vs " << far.matching << "/" << far.total;
      out.expect(near.matching > far.matching,
                 std::string(pm::level_name(level)) + " ordering does not hold");
    }
    if (out.ok) out.detail = detail.str();
    return out;
  });

  criterion("clustering behaviour on the Initial library", 30000.0, [&] {
    Outcome out;
    const auto corpus = pm::build_corpus(initial_library, pm::TacticMode::PlainCoq);
    out.expect(corpus.size() == 70, "Initial fixture has " + std::to_string(corpus.size()) + " lemmas");
    const std::vector<std::string> running{"app_l_nil", "app_nil_l", "mult_0_n", "mult_n_0"};
    const std::vector<std::string> induction{"app_l_nil", "minus_n_0", "mult_n_0", "plus_n_0"};
    const std::vector<std::string> simplification{"app_nil_l", "minus_0_n", "mult_0_n", "plus_0_n"};

    const auto g3 = pm::cluster_corpus(corpus.goal, goal_kmeans(3));
    const auto together = std::find_if(g3.entries.begin(), g3.entries.end(),
                                       [&](const pm::ClusterEntry& e) { return has_all(e.lemmas, running); });
    out.expect(together != g3.entries.end(), "g=3 has no cluster with all four running examples");

    const auto g5 = pm::cluster_corpus(corpus.goal, goal_kmeans(5));
    const auto split = std::find_if(g5.entries.begin(), g5.entries.end(), [&](const pm::ClusterEntry& e) {
      return has_all(e.lemmas, induction) && !has_any(e.lemmas, simplification);
    });
    out.expect(split != g5.entries.end(), "g=5 has no induction cluster without the simplification lemmas");
    if (out.ok) {
      std::ostringstream d;
      d.precision(1);
      d << std::fixed << "g=3 " << together->frequency_pct << "% {" << join(together->lemmas) << "}; g=5 "
        << split->frequency_pct << "% {" << join(split->lemmas) << "}";
      out.detail = d.str();
    }
    return out;
  });

  criterion("goal-dependent suggestion on the bigop library", 60000.0, [&] {
    Outcome out;
    const auto corpus = pm::build_corpus(bigop_library, pm::TacticMode::SSReflect);
    out.expect(corpus.size() >= 20, "bigop fixture is too small");
    const auto partial = pm::load_partial(pm::read_file(oracle::fixture("sum_first_n_partial.trace")));
    const auto g5 = pm::suggest_partial(corpus, partial, goal_kmeans(5));
    out.expect(g5.suggestion && g5.suggestion->lemmas == std::vector<std::string>{"fact_prod"},
               "g=5 suggestion is {" + (g5.suggestion ? join(g5.suggestion->lemmas) : "") + "}");
    const auto g3 = pm::suggest_partial(corpus, partial, goal_kmeans(3));
    out.expect(g3.suggestion && has_all(g3.suggestion->lemmas, {"fact_prod"}),
               "g=3 suggestion lacks fact_prod");
    if (out.ok) {
      out.detail = "g=5 {" + join(g5.suggestion->lemmas) + "}; g=3 {" + join(g3.suggestion->lemmas) + "}";
    }
    return out;
  });

  criterion("property suites", 0, [&] {
    Outcome out;
    const auto bigop = pm::build_corpus(bigop_library, pm::TacticMode::SSReflect);
    const auto initial = pm::build_corpus(initial_library, pm::TacticMode::PlainCoq);
    const auto data = pm::standardize(pm::Dataset::from_vectors(bigop.goal)).data;
    kmeans_monotone(out, data);
    gmm_monotone(out, data);
    pca_orthonormal(out, data);
    silhouette_oracle(out, data);
    threshold_subsets(out);
    round_trips(out, bigop, pm::cluster_corpus(initial.goal, goal_kmeans(3)));
    determinism(out, initial);
    return out;
  });

  criterion("runs without secondary components", 0, [] {
    Outcome out;
#ifdef PROOFMINER_SECONDARY_BUILT
    out.expect(false, "a secondary component is part of this build");
#endif
    return out;
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
