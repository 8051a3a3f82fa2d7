#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <iterator>
#include <set>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "oracles.hpp"
#include "proofminer/io.hpp"
#include "proofminer/pipeline.hpp"

namespace pm = proofminer;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("proofminer_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args, const std::string& env = "") {
  const auto out = scratch() / "stdout.txt";
  const auto err = scratch() / "stderr.txt";
  const std::string command = env + " '" + std::string(PROOFMINER_CLI) + "' " + args + " >'" +
                              out.string() + "' 2>'" + err.string() + "'";
  const int raw = std::system(command.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = pm::read_file(out);
  r.err = pm::read_file(err);
  return r;
}

std::string fx(const std::string& name) { return "'" + oracle::fixture(name).string() + "'"; }

// Export directories built once per process.
const fs::path& initial_export() {
  static const fs::path dir = [] {
    const auto d = scratch() / "initial";
    const auto r = run("extract " + fx("Initial.v") + " --trace " + fx("Initial.trace") +
                       " -m coq -o '" + d.string() + "'");
    REQUIRE(r.status == 0);
    return d;
  }();
  return dir;
}

const fs::path& bigop_export() {
  static const fs::path dir = [] {
    const auto d = scratch() / "bigop";
    const auto r = run("extract " + fx("bigop.trace") + " -o '" + d.string() + "'");
    REQUIRE(r.status == 0);
    return d;
  }();
  return dir;
}

std::set<std::string> cluster_lines(const std::string& out) {
  std::set<std::string> lines;
  std::istringstream in(out);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) lines.insert(line);
  return lines;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("extract the Initial library") {
  const auto dir = scratch() / "extract_goal";
  const auto r = run("extract " + fx("Initial.v") + " --trace " + fx("Initial.trace") +
                     " --level goal -m coq -o '" + dir.string() + "'");
  CHECK(r.status == 0);
  CHECK(r.out.find("70 vectors at goal level") != std::string::npos);
  CHECK(r.out.find("mult_n_0\t30") != std::string::npos);
  CHECK(pm::import_library(dir).size() == 70);
}

TEST_CASE("extracting a missing file names it") {
  const auto r = run("extract /no/such/dir/Missing.v -o '" + (scratch() / "x").string() + "'");
  CHECK(r.status == 2);
  CHECK(r.err.find("/no/such/dir/Missing.v") != std::string::npos);
}

TEST_CASE("parse errors exit with status two and a position") {
  const auto bad = scratch() / "bad.v";
  pm::write_file(bad, "Lemma a : P.\nProof.\n  intro x.\n");
  const auto r = run("extract '" + bad.string() + "' -o '" + (scratch() / "bad").string() + "'");
  CHECK(r.status == 2);
  CHECK(r.err.find("bad.v:") != std::string::npos);
}

TEST_CASE("tree level without tree data warns and encodes zeros") {
  const auto dir = scratch() / "notree";
  const auto r = run("extract " + fx("series.v") + " --level tree -o '" + dir.string() + "'");
  CHECK(r.status == 0);
  CHECK(r.err.find("no proof tree") != std::string::npos);
  for (const auto& v : pm::import_library(dir).tree) {
    CHECK(v.values == std::vector<double>(40, 0.0));
  }
}

TEST_CASE("granularity outside its range is a usage error") {
  CHECK(run("cluster '" + initial_export().string() + "' -g 6").status == 1);
  CHECK(run("cluster '" + initial_export().string() + "' -f 0").status == 1);
  CHECK(run("cluster '" + initial_export().string() + "' --level proof").status == 1);
  CHECK(run("frobnicate").status == 1);
}

TEST_CASE("cluster groups the running examples") {
  const auto r = run("cluster '" + initial_export().string() + "' --algorithm kmeans -g 3 -f 1 --seed 7");
  REQUIRE(r.status == 0);
  bool together = false;
  for (const auto& line : cluster_lines(r.out)) {
    std::istringstream words(line);
    const std::set<std::string> lemmas{std::istream_iterator<std::string>(words), {}};
    together = together || (lemmas.count("app_l_nil") && lemmas.count("app_nil_l") &&
                            lemmas.count("mult_0_n") && lemmas.count("mult_n_0"));
  }
  CHECK(together);
}

TEST_CASE("stricter frequency prints a subset") {
  const auto base = "cluster '" + initial_export().string() + "' -g 4 --seed 11 --runs 100";
  const auto f1 = run(base + " -f 1");
  const auto f3 = run(base + " -f 3");
  REQUIRE(f1.status == 0);
  REQUIRE(f3.status == 0);
  const auto all = cluster_lines(f1.out);
  for (const auto& line : cluster_lines(f3.out)) {
    if (line == "no clusters") continue;
    CHECK(all.count(line) == 1);
  }
}

TEST_CASE("cluster output equals the library result") {
  const auto r = run("cluster '" + initial_export().string() + "' -g 2 --seed 5 --runs 50 --xml -");
  REQUIRE(r.status == 0);
  pm::EngineConfig config;
  config.granularity = 2;
  config.master_seed = 5;
  config.runs = 50;
  const auto corpus = pm::import_library(initial_export());
  CHECK(r.out == pm::cluster_xml_text(pm::cluster_corpus(corpus.goal, config)));
}

TEST_CASE("seed from the environment and defaults from a config file") {
  const auto conf = scratch() / "engine.conf";
  pm::write_file(conf, "# defaults\ngranularity = 2\nruns = 50\n");
  const auto from_env = run("cluster '" + initial_export().string() + "' --xml - --config '" +
                                conf.string() + "'",
                            "PROOFMINER_SEED=5");
  const auto explicit_seed = run("cluster '" + initial_export().string() +
                                 "' -g 2 --runs 50 --seed 5 --xml -");
  REQUIRE(from_env.status == 0);
  CHECK(from_env.out == explicit_seed.out);

  pm::write_file(conf, "granularity = 9\n");
  CHECK(run("cluster '" + initial_export().string() + "' --config '" + conf.string() + "'").status == 1);
}

TEST_CASE("too small a corpus is a precondition failure") {
  const auto dir = scratch() / "series";
  REQUIRE(run("extract " + fx("series.trace") + " -o '" + dir.string() + "'").status == 0);
  const auto r = run("cluster '" + dir.string() + "'");
  CHECK(r.status == 3);
}

TEST_CASE("suggest for the partial sum_first_n") {
  const auto r = run("suggest '" + bigop_export().string() + "' -t " + fx("sum_first_n_partial.trace") +
                     " -g 5 --seed 7");
  REQUIRE(r.status == 0);
  CHECK(r.out.find("suggestions for sum_first_n") != std::string::npos);
  CHECK(r.out.find("  fact_prod : ") != std::string::npos);
}

TEST_CASE("suggest with an empty corpus") {
  const auto r = run("suggest -t " + fx("sum_first_n_partial.trace"));
  CHECK(r.status == 0);
  CHECK(r.out == "no suggestion\n");
}

TEST_CASE("suggest reads a partial script") {
  const auto partial = scratch() / "partial.v";
  pm::write_file(partial, "Lemma sum_first_n : forall n, P n.\nProof.\n  elim : n.\n  rewrite mul0n big_nat1 muln0.\n");
  const auto r = run("suggest '" + bigop_export().string() + "' -t '" + partial.string() + "' --runs 20");
  CHECK(r.status == 0);
}

}  // TEST_SUITE
