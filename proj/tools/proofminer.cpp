// proofminer: extract feature vectors from proof libraries, cluster them and
// suggest similar proofs for a partial one.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "proofminer/io.hpp"
#include "proofminer/parser.hpp"
#include "proofminer/pipeline.hpp"
#include "proofminer/service.hpp"

namespace pm = proofminer;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitPrecondition = 3;

struct EngineFlags {
  std::string config_path;
  std::string algorithm;
  std::string level;
  int granularity = 0;
  int frequency = 0;
  std::uint64_t seed = 0;
  int runs = 0;
  unsigned threads = 0;
  bool no_pca = false;
  std::map<std::string, CLI::Option*> given;
};

void add_engine_options(CLI::App* cmd, EngineFlags& flags) {
  flags.given["config"] = cmd->add_option("--config", flags.config_path, "key=value defaults file");
  flags.given["algorithm"] =
      cmd->add_option("-a,--algorithm", flags.algorithm, "kmeans, gaussian or farthest-first");
  flags.given["level"] = cmd->add_option("-l,--level", flags.level, "goal, tactic or tree");
  flags.given["granularity"] =
      cmd->add_option("-g,--granularity", flags.granularity, "granularity 1..5")
          ->check(CLI::Range(1, 5));
  flags.given["frequency"] =
      cmd->add_option("-f,--frequency", flags.frequency, "frequency 1..3")->check(CLI::Range(1, 3));
  flags.given["seed"] = cmd->add_option("--seed", flags.seed, "master seed")->envname("PROOFMINER_SEED");
  flags.given["runs"] =
      cmd->add_option("--runs", flags.runs, "clustering runs")->check(CLI::PositiveNumber);
  flags.given["threads"] = cmd->add_option("--threads", flags.threads, "worker threads, 0 for all");
  flags.given["pca"] = cmd->add_flag("--no-pca", flags.no_pca, "never reduce dimensions");
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw pm::Error(pm::ErrorCode::Usage, "expected a boolean, got '" + text + "'");
}

int parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(text, &used);
    if (used == text.size()) return value;
  } catch (const std::exception&) {
  }
  throw pm::Error(pm::ErrorCode::Usage, key + " expects an integer, got '" + text + "'");
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::map<std::string, std::string> out;
  std::ifstream in(path);
  if (!in) throw pm::Error(pm::ErrorCode::Io, "cannot read " + path);
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw pm::Error(pm::ErrorCode::Usage, path + ":" + std::to_string(number) + ": expected key=value");
    }
    auto key = line.substr(b, eq - b);
    auto value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t\r") + 1);
    out[key] = value;
  }
  return out;
}

void apply_config_key(pm::EngineConfig& config, const std::string& key, const std::string& value) {
  if (key == "algorithm") config.algorithm = pm::parse_algorithm(value);
  else if (key == "level") config.level = pm::parse_level(value);
  else if (key == "granularity" || key == "g") config.granularity = parse_int(key, value);
  else if (key == "frequency" || key == "f") config.frequency_param = parse_int(key, value);
  else if (key == "runs") config.runs = parse_int(key, value);
  else if (key == "seed") config.master_seed = std::stoull(value);
  else if (key == "threads") config.threads = static_cast<unsigned>(parse_int(key, value));
  else if (key == "pca") config.use_pca = parse_bool(value);
  else if (key != "port" && key != "host") {
    throw pm::Error(pm::ErrorCode::Usage, "unknown config key '" + key + "'");
  }
}

// Defaults, then the config file, then PROOFMINER_SEED, then flags.
pm::EngineConfig resolve_config(const EngineFlags& flags,
                                std::map<std::string, std::string>* file_values = nullptr) {
  pm::EngineConfig config;
  if (!flags.config_path.empty()) {
    const auto values = read_config_file(flags.config_path);
    for (const auto& [key, value] : values) apply_config_key(config, key, value);
    if (file_values) *file_values = values;
  }
  auto given = [&](const char* name) { return flags.given.at(name)->count() > 0; };
  if (given("algorithm")) config.algorithm = pm::parse_algorithm(flags.algorithm);
  if (given("level")) config.level = pm::parse_level(flags.level);
  if (given("granularity")) config.granularity = flags.granularity;
  if (given("frequency")) config.frequency_param = flags.frequency;
  if (given("runs")) config.runs = flags.runs;
  if (given("threads")) config.threads = flags.threads;
  if (given("pca")) config.use_pca = false;
  if (given("seed")) {
    config.master_seed = flags.seed;
  } else if (const char* env = std::getenv("PROOFMINER_SEED"); env && *env) {
    config.master_seed = std::stoull(env);
  }
  try {
    config.validate();
  } catch (const pm::Error& e) {
    throw pm::Error(pm::ErrorCode::Usage, e.what());
  }
  return config;
}

int exit_code_for(pm::ErrorCode code) {
  switch (code) {
    case pm::ErrorCode::Usage:
    case pm::ErrorCode::OutOfRange:
      return kExitUsage;
    case pm::ErrorCode::CorpusTooSmall:
    case pm::ErrorCode::TooFewPoints:
    case pm::ErrorCode::KTooLarge:
      return kExitPrecondition;
    default:
      return kExitInput;
  }
}

std::string frequency_text(double pct) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << pct << "%";
  return out.str();
}

void print_report(const pm::ClusterReport& report, std::ostream& out) {
  const auto& c = report.config;
  out << "corpus " << report.corpus_size << " lemmas, k=" << report.n_clusters
      << ", algorithm " << pm::algorithm_name(c.algorithm) << ", level " << pm::level_name(c.level)
      << ", g=" << c.granularity << ", f=" << c.frequency_param << ", runs " << c.runs
      << ", seed " << c.master_seed << "\n";
  if (report.entries.empty()) {
    out << "no clusters\n";
    return;
  }
  for (const auto& entry : report.entries) {
    out << std::setw(8) << frequency_text(entry.frequency_pct) << "  ";
    for (std::size_t i = 0; i < entry.lemmas.size(); ++i) out << (i ? " " : "") << entry.lemmas[i];
    out << "\n";
  }
}

// extract ------------------------------------------------------------------

struct ExtractArgs {
  std::vector<std::string> inputs;
  std::string trace_path;
  std::string out_dir = "export";
  std::string level = "goal";
  std::string mode = "ssreflect";
  std::string name;
};

int run_extract(const ExtractArgs& args) {
  const auto level = pm::parse_level(args.level);
  const auto mode = pm::parse_mode(args.mode);

  pm::TraceLibrary traces;
  if (!args.trace_path.empty()) traces = pm::read_trace_file(args.trace_path);
  std::map<std::string, pm::ProofTrace> by_name;
  for (const auto& t : traces.traces) by_name.emplace(t.lemma_name, t);

  pm::TraceLibrary library;
  library.name = !args.name.empty() ? args.name : traces.name;
  for (const auto& input : args.inputs) {
    const std::filesystem::path path(input);
    if (library.name.empty()) library.name = path.stem().string();
    if (path.extension() != ".v") {
      for (auto& t : pm::read_trace_file(path).traces) library.traces.push_back(std::move(t));
      continue;
    }
    const auto text = pm::read_file(path);
    std::vector<pm::ScriptProof> proofs;
    try {
      proofs = pm::parse_script(text);
    } catch (const pm::Error& e) {
      throw pm::Error(e.code(), path.string() + ":" + e.what());
    }
    for (const auto& proof : proofs) {
      for (const auto& warning : proof.warnings) {
        std::cerr << path.string() << ":" << proof.pos.line << ": warning: " << proof.lemma_name
                  << ": " << warning << "\n";
      }
      const auto it = by_name.find(proof.lemma_name);
      auto trace = pm::merge_script_into_trace(
          proof, it == by_name.end() ? std::nullopt : std::optional<pm::ProofTrace>(it->second));
      trace.library = library.name;
      library.traces.push_back(std::move(trace));
    }
  }
  if (args.inputs.empty()) library.traces = traces.traces;

  if (level == pm::Level::Tree) {
    for (const auto& t : library.traces) {
      if (!t.tree) {
        std::cerr << "warning: " << t.lemma_name << " has no proof tree; tree features are absent\n";
      }
    }
  }
  const auto corpus = pm::build_corpus(library, mode);
  pm::write_corpus(corpus, args.out_dir);
  for (const auto& v : corpus.vectors(level)) {
    std::cout << v.lemma_name << "\t" << v.values.size() << (v.saturated ? "\tsaturated" : "")
              << "\n";
  }
  std::cout << corpus.size() << " vectors at " << pm::level_name(level) << " level written to "
            << args.out_dir << "\n";
  return kExitOk;
}

// cluster / suggest / serve --------------------------------------------------

int run_cluster(const std::vector<std::string>& dirs, const EngineFlags& flags,
                const std::string& xml_path) {
  const auto config = resolve_config(flags);
  const auto corpus = pm::import_libraries({dirs.begin(), dirs.end()});
  const auto report = pm::cluster_corpus(corpus.vectors(config.level), config);
  if (xml_path == "-") {
    std::cout << pm::cluster_xml_text(report);
    return kExitOk;
  }
  print_report(report, std::cout);
  if (!xml_path.empty()) pm::write_cluster_xml(report, xml_path);
  return kExitOk;
}

int run_suggest(const std::vector<std::string>& dirs, const EngineFlags& flags,
                const std::string& partial_path) {
  const auto config = resolve_config(flags);
  const auto corpus = pm::import_libraries({dirs.begin(), dirs.end()});
  const auto partial = pm::load_partial(pm::read_file(partial_path));
  const auto result = pm::suggest_partial(corpus, partial, config);
  if (!result.suggestion) {
    std::cout << "no suggestion\n";
    return kExitOk;
  }
  std::cout << "suggestions for " << partial.lemma_name << " (cluster frequency "
            << frequency_text(result.suggestion->frequency_pct) << ")\n";
  for (const auto& name : result.suggestion->lemmas) {
    std::cout << "  " << name;
    if (const auto* info = corpus.find(name); info && !info->statement.empty()) {
      std::cout << " : " << info->statement;
    }
    std::cout << "\n";
  }
  return kExitOk;
}

int run_serve(const std::vector<std::string>& dirs, const EngineFlags& flags, std::string host,
              int port, bool port_given, bool host_given) {
  std::map<std::string, std::string> file_values;
  const auto config = resolve_config(flags, &file_values);
  if (!port_given && file_values.count("port")) port = parse_int("port", file_values["port"]);
  if (!host_given && file_values.count("host")) host = file_values["host"];
  pm::Service service({dirs.begin(), dirs.end()}, config);
  std::cout << "serving " << service.corpus()->size() << " lemmas on http://" << host << ":" << port
            << std::endl;
  if (!service.serve(host, port)) {
    std::cerr << "proofminer: cannot listen on " << host << ":" << port << "\n";
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mine proof libraries for families of similar proofs"};
  app.require_subcommand(1);

  ExtractArgs extract_args;
  auto* extract = app.add_subcommand("extract", "Build a library export from scripts and traces");
  extract->add_option("inputs", extract_args.inputs, "proof scripts (.v) or trace files");
  extract->add_option("--trace", extract_args.trace_path, "trace file with goals and trees");
  extract->add_option("-o,--out", extract_args.out_dir, "export directory")->capture_default_str();
  extract->add_option("-l,--level", extract_args.level, "level whose vectors are listed")
      ->capture_default_str();
  extract->add_option("-m,--mode", extract_args.mode, "tactic universe: ssreflect or coq")
      ->capture_default_str();
  extract->add_option("--name", extract_args.name, "library name");

  std::vector<std::string> cluster_dirs;
  EngineFlags cluster_flags;
  std::string xml_path;
  auto* cluster = app.add_subcommand("cluster", "Cluster one or more library exports");
  cluster->add_option("exports", cluster_dirs, "export directories")->required();
  add_engine_options(cluster, cluster_flags);
  cluster->add_option("--xml", xml_path, "write the cluster XML here ('-' for stdout)");

  std::vector<std::string> suggest_dirs;
  EngineFlags suggest_flags;
  std::string partial_path;
  auto* suggest = app.add_subcommand("suggest", "Suggest proofs similar to a partial proof");
  suggest->add_option("exports", suggest_dirs, "export directories");
  suggest->add_option("-t,--trace", partial_path, "partial proof (trace or script)")->required();
  add_engine_options(suggest, suggest_flags);

  std::vector<std::string> serve_dirs;
  EngineFlags serve_flags;
  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the JSON endpoints over HTTP");
  serve->add_option("exports", serve_dirs, "export directories");
  auto* port_opt = serve->add_option("-p,--port", port, "port")->capture_default_str();
  auto* host_opt = serve->add_option("--host", host, "address")->capture_default_str();
  add_engine_options(serve, serve_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*extract) return run_extract(extract_args);
    if (*cluster) return run_cluster(cluster_dirs, cluster_flags, xml_path);
    if (*suggest) return run_suggest(suggest_dirs, suggest_flags, partial_path);
    if (*serve) {
      return run_serve(serve_dirs, serve_flags, host, port, port_opt->count() > 0,
                       host_opt->count() > 0);
    }
  } catch (const pm::Error& e) {
    std::cerr << "proofminer: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "proofminer: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
