#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "proofminer/model.hpp"

namespace pm = proofminer;

namespace {

bool mentions(const std::vector<std::string>& problems, const std::string& text) {
  return std::any_of(problems.begin(), problems.end(),
                     [&](const std::string& p) { return p.find(text) != std::string::npos; });
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("worked example traces validate") {
  CHECK(pm::validate_trace(oracle::app_nil_l()).empty());
  CHECK(pm::validate_trace(oracle::mult_n_0()).empty());
  CHECK(pm::validate_trace(oracle::app_l_nil()).empty());
}

TEST_CASE("complete proof without steps is rejected") {
  pm::ProofTrace t;
  t.lemma_name = "x";
  t.complete = true;
  CHECK(mentions(pm::validate_trace(t), "empty complete proof"));
  t.complete = false;
  CHECK(pm::validate_trace(t).empty());
}

TEST_CASE("closed node with children is rejected") {
  auto t = oracle::app_nil_l();
  t.tree->closed = true;
  CHECK(mentions(pm::validate_trace(t), "closed node has children"));
}

TEST_CASE("negative subgoal count and unnamed lemma argument are reported") {
  auto t = oracle::mult_n_0();
  t.steps[1].n_subgoals_after = -1;
  t.steps[2].tactics[0].args.push_back({std::string("Prop"), pm::ArgRole::ExternalLemma, ""});
  const auto problems = pm::validate_trace(t);
  CHECK(mentions(problems, "negative subgoal count"));
  CHECK(mentions(problems, "external lemma argument without a name"));
}

TEST_CASE("tree depth and step references are checked") {
  auto t = oracle::mult_n_0();
  t.tree->children[0].depth = 5;
  t.tree->children[1].step = 9;
  const auto problems = pm::validate_trace(t);
  CHECK(mentions(problems, "does not equal parent depth"));
  CHECK(mentions(problems, "missing step 9"));
}

TEST_CASE("symbol tables assign consecutive codes per namespace") {
  pm::SymbolTables s;
  CHECK(s.empty());
  CHECK(s.intern(pm::Namespace::Tactic, "induction") == 1);
  CHECK(s.intern(pm::Namespace::Tactic, "simpl") == 2);
  CHECK(s.intern(pm::Namespace::Tactic, "induction") == 1);
  CHECK(s.intern(pm::Namespace::Type, "nat") == 1);
  CHECK(s.intern(pm::Namespace::Lemma, "big_nil") == pm::kCodeIH + 1);
  CHECK(s.table(pm::Namespace::Tactic).name_of(2) == "simpl");
  CHECK_THROWS_AS(s.table(pm::Namespace::Tactic).name_of(7), pm::Error);

  s.freeze();
  CHECK(s.intern(pm::Namespace::Tactic, "simpl") == 2);
  CHECK_THROWS_AS(s.intern(pm::Namespace::Tactic, "auto"), std::logic_error);
  auto copy = s.thawed();
  CHECK_FALSE(copy.frozen());
  CHECK(copy.intern(pm::Namespace::Tactic, "auto") == 3);
  CHECK_FALSE(s.find(pm::Namespace::Tactic, "auto"));
}

TEST_CASE("feature table lookups") {
  pm::FeatureTable t(pm::Level::Goal, {"g1", "g2"}, {"a", "b", "c"});
  CHECK(t.rows() == 2);
  CHECK(t.cols() == 3);
  CHECK(std::holds_alternative<pm::Absent>(t.at(1, 2)));
  t.at(1, 2) = pm::Count{4};
  CHECK(t.at(t.row_index("g2"), t.col_index("c")) == pm::Cell{pm::Count{4}});
  CHECK_THROWS_AS(t.row_index("g9"), pm::Error);
}

TEST_CASE("engine configuration bounds") {
  pm::EngineConfig c;
  CHECK_NOTHROW(c.validate());
  c.granularity = 6;
  CHECK_THROWS_AS(c.validate(), pm::Error);
  c.granularity = 0;
  CHECK_THROWS_AS(c.validate(), pm::Error);
  c = {};
  c.frequency_param = 4;
  CHECK_THROWS_AS(c.validate(), pm::Error);
  c = {};
  c.runs = 0;
  try {
    c.validate();
    FAIL("expected OutOfRange");
  } catch (const pm::Error& e) {
    CHECK(e.code() == pm::ErrorCode::OutOfRange);
  }
}

TEST_CASE("names of levels and algorithms parse back") {
  for (auto level : {pm::Level::Goal, pm::Level::Tactic, pm::Level::Tree}) {
    CHECK(pm::parse_level(pm::level_name(level)) == level);
  }
  CHECK(pm::parse_level("TREE") == pm::Level::Tree);
  for (auto a : {pm::Algorithm::KMeans, pm::Algorithm::GaussianMixture,
                 pm::Algorithm::FarthestFirst}) {
    CHECK(pm::parse_algorithm(pm::algorithm_name(a)) == a);
  }
  CHECK_THROWS_AS(pm::parse_level("proof"), pm::Error);
  CHECK_THROWS_AS(pm::parse_algorithm("dbscan"), pm::Error);
}

}  // TEST_SUITE
