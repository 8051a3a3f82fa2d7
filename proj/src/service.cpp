#include "proofminer/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>

namespace proofminer {

using nlohmann::json;

namespace {

bool looks_like_trace(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string_view::npos || line[b] == '#') continue;
    line.remove_prefix(b);
    return line.rfind("library", 0) == 0 || line.rfind("lemma ", 0) == 0;
  }
  return false;
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownLemma: return 404;
    case ErrorCode::CorpusTooSmall: return 422;
    case ErrorCode::Io: return 500;
    default: return 400;
  }
}

Response error_response(int status, std::string_view code, const std::string& message) {
  json body{{"error", {{"code", code}, {"message", message}}}};
  return {status, body.dump()};
}

Response error_response(const Error& e) {
  return error_response(http_status(e.code()), error_code_name(e.code()), e.what());
}

json parse_body(std::string_view body) {
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) return json::object();
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw Error(ErrorCode::Usage, "request body must be a JSON object");
  }
  return parsed;
}

template <typename T>
T field(const json& body, std::initializer_list<const char*> keys, T fallback) {
  for (const char* key : keys) {
    if (!body.contains(key)) continue;
    try {
      return body.at(key).get<T>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::Usage, std::string("field '") + key + "' has the wrong type");
    }
  }
  return fallback;
}

EngineConfig config_from(const json& body, EngineConfig config) {
  if (body.contains("algorithm")) {
    config.algorithm = parse_algorithm(field<std::string>(body, {"algorithm"}, ""));
  }
  if (body.contains("level")) config.level = parse_level(field<std::string>(body, {"level"}, ""));
  config.granularity = field<int>(body, {"granularity", "g"}, config.granularity);
  config.frequency_param = field<int>(body, {"frequency", "f"}, config.frequency_param);
  config.runs = field<int>(body, {"runs"}, config.runs);
  config.master_seed = field<std::uint64_t>(body, {"seed"}, config.master_seed);
  config.use_pca = field<bool>(body, {"pca"}, config.use_pca);
  config.validate();
  return config;
}

json config_json(const EngineConfig& config) {
  return {{"algorithm", algorithm_name(config.algorithm)},
          {"level", level_name(config.level)},
          {"granularity", config.granularity},
          {"frequency", config.frequency_param},
          {"runs", config.runs},
          {"seed", config.master_seed},
          {"pca", config.use_pca}};
}

json report_json(const ClusterReport& report) {
  json clusters = json::array();
  for (const auto& entry : report.entries) {
    clusters.push_back({{"lemmas", entry.lemmas}, {"frequency", entry.frequency_pct}});
  }
  return {{"config", config_json(report.config)},
          {"k", report.n_clusters},
          {"corpus_size", report.corpus_size},
          {"clusters", clusters},
          {"xml", cluster_xml_text(report)}};
}

json lemma_json(const Corpus& corpus, const std::string& name) {
  json out{{"name", name}};
  if (const auto* info = corpus.find(name)) {
    out["statement"] = info->statement;
    out["library"] = info->library;
  }
  return out;
}

}  // namespace

ProofTrace load_partial(std::string_view text) {
  if (looks_like_trace(text)) {
    auto library = read_trace_text(text);
    if (library.traces.empty()) throw Error(ErrorCode::Format, "no proof in the partial trace");
    return library.traces.back();
  }
  std::vector<ScriptProof> proofs;
  try {
    proofs = parse_script(text);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnterminatedProof) throw;
    proofs = parse_script(std::string(text) + "\nAdmitted.\n");
  }
  if (proofs.empty()) throw Error(ErrorCode::Parse, "no proof in the partial script");
  return merge_script_into_trace(proofs.back(), std::nullopt);
}

GoalClustering suggest_partial(const Corpus& corpus, const ProofTrace& partial,
                               const EngineConfig& config) {
  GoalClustering out;
  out.report.config = config;
  if (corpus.size() == 0) return out;
  const auto universe = TacticUniverse::for_mode(corpus.mode);
  const auto current = encode_extra(partial, config.level, universe, corpus.symbols).first;
  return cluster_with_goal(corpus.vectors(config.level), current, config);
}

// ---------------------------------------------------------------------------

Service::Service(std::vector<std::filesystem::path> dirs, EngineConfig defaults)
    : dirs_(std::move(dirs)), defaults_(defaults) {
  corpus_ = std::make_shared<const Corpus>(import_libraries(dirs_));
}

Service::Service(Corpus corpus, EngineConfig defaults)
    : defaults_(defaults), corpus_(std::make_shared<const Corpus>(std::move(corpus))) {}

std::shared_ptr<const Corpus> Service::corpus() const {
  std::lock_guard lock(mutex_);
  return corpus_;
}

Response Service::corpus_info() const {
  const auto corpus = this->corpus();
  json lemmas = json::array();
  for (const auto& info : corpus->lemmas) {
    lemmas.push_back({{"name", info.name}, {"statement", info.statement}, {"library", info.library}});
  }
  json body{{"name", corpus->name},
            {"mode", mode_name(corpus->mode)},
            {"size", corpus->size()},
            {"levels", {"goal", "tactic", "tree"}},
            {"defaults", config_json(defaults_)},
            {"lemmas", lemmas}};
  return {200, body.dump()};
}

Response Service::cluster(std::string_view body) const {
  try {
    const auto config = config_from(parse_body(body), defaults_);
    const auto corpus = this->corpus();
    return {200, report_json(cluster_corpus(corpus->vectors(config.level), config)).dump()};
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response Service::suggest(std::string_view body) const {
  try {
    const auto request = parse_body(body);
    const auto config = config_from(request, defaults_);
    std::string text = field<std::string>(request, {"trace", "script"}, "");
    if (text.empty()) throw Error(ErrorCode::Usage, "request needs a 'trace' or 'script' field");
    const auto partial = load_partial(text);
    const auto corpus = this->corpus();
    const auto result = suggest_partial(*corpus, partial, config);

    json out{{"lemma", partial.lemma_name}, {"report", report_json(result.report)}};
    if (result.suggestion) {
      json lemmas = json::array();
      for (const auto& name : result.suggestion->lemmas) lemmas.push_back(lemma_json(*corpus, name));
      out["suggestion"] = {{"lemmas", lemmas}, {"frequency", result.suggestion->frequency_pct}};
    } else {
      out["suggestion"] = nullptr;
    }
    return {200, out.dump()};
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response Service::lemma(std::string_view name) const {
  const auto corpus = this->corpus();
  const auto* info = corpus->find(name);
  if (!info) {
    return error_response(404, error_code_name(ErrorCode::UnknownLemma),
                          "unknown lemma '" + std::string(name) + "'");
  }
  json body{{"name", info->name},
            {"statement", info->statement},
            {"script", info->script},
            {"library", info->library}};
  return {200, body.dump()};
}

Response Service::reload() {
  try {
    auto fresh = std::make_shared<const Corpus>(import_libraries(dirs_));
    std::lock_guard lock(mutex_);
    corpus_ = std::move(fresh);
    return {200, json{{"size", corpus_->size()}}.dump()};
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    if (method == "GET" && path == "/corpus") return corpus_info();
    if (method == "POST" && path == "/cluster") return cluster(body);
    if (method == "POST" && path == "/suggest") return suggest(body);
    if (method == "POST" && path == "/reload") return reload();
    constexpr std::string_view lemma_prefix = "/lemma/";
    if (method == "GET" && path.rfind(lemma_prefix, 0) == 0) {
      return lemma(httplib::detail::decode_url(std::string(path.substr(lemma_prefix.size())), false));
    }
    return error_response(404, "not_found", "no route for " + std::string(method) + " " +
                                                std::string(path));
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

bool Service::serve(const std::string& host, int port) {
  auto server = std::make_shared<httplib::Server>();
  {
    std::lock_guard lock(mutex_);
    server_ = server;
  }
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    const auto out = handle(req.method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  server->Get(R"(/.*)", route);
  server->Post(R"(/.*)", route);
  return server->listen(host, port);
}

void Service::stop() {
  std::shared_ptr<void> server;
  {
    std::lock_guard lock(mutex_);
    server = server_;
  }
  if (server) static_cast<httplib::Server*>(server.get())->stop();
}

}  // namespace proofminer
