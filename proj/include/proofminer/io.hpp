#pragma once

// CSV and ARFF vector files, library export directories and the cluster XML
// document.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "proofminer/features.hpp"
#include "proofminer/model.hpp"
#include "proofminer/parser.hpp"

namespace proofminer {

namespace fs = std::filesystem;

/// Shortest decimal that reads back to the same double (at most 17 digits).
std::string format_number(double value);

// CSV ------------------------------------------------------------------------

std::string csv_text(const std::vector<FeatureVector>& vectors);
std::vector<std::vector<double>> parse_csv(std::string_view text);

/// Writes `path` and the companion `path.names` with one lemma per line.
void write_csv(const std::vector<FeatureVector>& vectors, const fs::path& path);
std::vector<FeatureVector> read_csv(const fs::path& path, Level level);

// ARFF -----------------------------------------------------------------------

struct ArffData {
  std::string relation;
  std::vector<std::string> attributes;
  std::vector<std::string> labels;  // from the `% lemma` comment before each row
  std::vector<std::vector<double>> rows;

  bool operator==(const ArffData&) const = default;
};

std::string arff_text(const std::vector<FeatureVector>& vectors, const std::string& relation);
ArffData parse_arff(std::string_view text);
void write_arff(const std::vector<FeatureVector>& vectors, const std::string& relation,
                const fs::path& path);
ArffData read_arff(const fs::path& path);
std::vector<FeatureVector> arff_vectors(const ArffData& data, Level level);

// Library export ---------------------------------------------------------------

struct LemmaInfo {
  std::string name;
  std::string statement;
  std::string script;
  std::string library;

  bool operator==(const LemmaInfo&) const = default;
};

/// Vectors of one or more libraries at all three levels, row-aligned with
/// `lemmas`, plus the symbol tables used to encode them.
struct Corpus {
  std::string name;
  TacticMode mode = TacticMode::SSReflect;
  SymbolTables symbols;
  std::vector<LemmaInfo> lemmas;
  std::vector<FeatureVector> goal;
  std::vector<FeatureVector> tactic;
  std::vector<FeatureVector> tree;

  const std::vector<FeatureVector>& vectors(Level level) const;
  const LemmaInfo* find(std::string_view lemma) const;
  std::size_t size() const { return lemmas.size(); }

  bool operator==(const Corpus&) const = default;
};

inline constexpr std::string_view kLemmaFile = "lemmas.txt";

/// Throws IncompleteProof if any trace is unfinished.
Corpus build_corpus(const TraceLibrary& library, TacticMode mode);

void write_corpus(const Corpus& corpus, const fs::path& dir);
void export_library(const TraceLibrary& library, TacticMode mode, const fs::path& dir);
Corpus import_library(const fs::path& dir);

/// Concatenates libraries; a lemma whose name is taken becomes `library.lemma`.
/// New proofs are encoded with the first library's symbols.
Corpus merge_corpora(const std::vector<Corpus>& parts);
Corpus import_libraries(const std::vector<fs::path>& dirs);

// Cluster XML ------------------------------------------------------------------

std::string cluster_xml_text(const ClusterReport& report);
/// Throws Error(Schema) on a document that does not follow the layout.
ClusterReport parse_cluster_xml(std::string_view text);
void write_cluster_xml(const ClusterReport& report, const fs::path& path);
ClusterReport read_cluster_xml(const fs::path& path);

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, std::string_view content);

}  // namespace proofminer
