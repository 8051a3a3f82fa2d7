#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "oracles.hpp"
#include "proofminer/features.hpp"
#include "proofminer/mlcore.hpp"

namespace pm = proofminer;

namespace {

pm::Dataset dataset(const Eigen::MatrixXd& points) {
  return pm::Dataset::from_vectors(oracle::vectors_from(points));
}

pm::Dataset column(std::initializer_list<double> values) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return dataset(m);
}

const pm::Dataset& fixture_goal_data() {
  static const pm::Dataset data = [] {
    const auto library = oracle::fixture_library("bigop");
    const auto corpus =
        pm::extract_corpus(library.traces, pm::Level::Goal, pm::TacticUniverse::ssreflect());
    return pm::standardize(pm::Dataset::from_vectors(corpus.vectors)).data;
  }();
  return data;
}

double agreement_up_to_relabel(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<std::pair<int, int>, int> joint;
  for (std::size_t i = 0; i < a.size(); ++i) ++joint[{a[i], b[i]}];
  std::map<int, int> best;
  for (const auto& [key, count] : joint) best[key.first] = std::max(best[key.first], count);
  int total = 0;
  for (const auto& [label, count] : best) total += count;
  return static_cast<double>(total) / static_cast<double>(a.size());
}

pm::ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const pm::Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return pm::ErrorCode::Io;
}

}  // namespace

TEST_SUITE("mlcore") {

TEST_CASE("dataset construction checks shapes") {
  std::vector<pm::FeatureVector> ragged(2);
  ragged[0].values = {1, 2};
  ragged[1].values = {1};
  CHECK(code_of([&] { pm::Dataset::from_vectors(ragged); }) == pm::ErrorCode::DimensionMismatch);
  ragged[1].values = {1, std::nan("")};
  CHECK(code_of([&] { pm::Dataset::from_vectors(ragged); }) == pm::ErrorCode::DimensionMismatch);
}

TEST_CASE("compact renumbers by first appearance") {
  CHECK(pm::compact({{3, 3, 0, 5}, 6}) == pm::Partition{{0, 0, 1, 2}, 3});
}

TEST_CASE("standardize a two-point column") {
  const auto s = pm::standardize(column({1, 3}));
  CHECK(s.data.points(0, 0) == doctest::Approx(-1.0));
  CHECK(s.data.points(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("standardize a constant column") {
  const auto s = pm::standardize(column({5, 5, 5}));
  CHECK(s.data.points.isZero());
  CHECK(s.scaler.stddev(0) == 0.0);
}

TEST_CASE("standardized random columns have zero mean and unit deviation") {
  const auto s = pm::standardize(dataset(oracle::blobs(50, 30, 4, 2.0, 11)));
  const Eigen::RowVectorXd mean = s.data.points.colwise().mean();
  CHECK(mean.cwiseAbs().maxCoeff() < 1e-9);
  for (Eigen::Index j = 0; j < 30; ++j) {
    CHECK(std::sqrt(s.data.points.col(j).squaredNorm() / 50.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("standardize needs two points") {
  CHECK(code_of([] { pm::standardize(column({1})); }) == pm::ErrorCode::TooFewPoints);
}

TEST_CASE("PCA of rank-one data keeps one component") {
  Eigen::MatrixXd m(6, 3);
  for (int i = 0; i < 6; ++i) m.row(i) = Eigen::RowVector3d(1, 2, -1) * (i - 2.5) + Eigen::RowVector3d(4, 0, 1);
  const auto pca = pm::pca_fit_transform(dataset(m), 0.9);
  CHECK(pca.model.components.cols() == 1);
  CHECK(pca.data.dims() == 1);
  CHECK((pm::pca_inverse_transform(pca.model, pca.data.points) - m).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("PCA of isotropic two-dimensional data keeps both components") {
  Eigen::MatrixXd m(4, 2);
  m << 1, 0, -1, 0, 0, 1, 0, -1;
  CHECK(pm::pca_fit_transform(dataset(m), 1.0).model.components.cols() == 2);
}

TEST_CASE("PCA eigenvalues match a Jacobi oracle and components are orthonormal") {
  const auto& data = fixture_goal_data();
  const auto pca = pm::pca_fit_transform(data, 0.95);
  const auto expected = oracle::jacobi_eigenvalues(oracle::covariance(data.points));
  REQUIRE(static_cast<std::size_t>(pca.model.eigenvalues.size()) == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(std::abs(pca.model.eigenvalues(static_cast<Eigen::Index>(i)) - std::max(0.0, expected[i])) < 1e-8);
  }
  const Eigen::MatrixXd gram = pca.model.components.transpose() * pca.model.components;
  CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("PCA reconstruction error equals the discarded variance") {
  const auto& data = fixture_goal_data();
  const auto pca = pm::pca_fit_transform(data, 0.95);
  const auto r = pca.model.components.cols();
  CHECK(pca.model.explained_ratio.sum() >= 0.95 - 1e-12);
  const auto back = pm::pca_inverse_transform(pca.model, pca.data.points);
  const double error = (back - data.points).squaredNorm() / static_cast<double>(data.size());
  const double discarded = pca.model.eigenvalues.tail(pca.model.eigenvalues.size() - r).sum();
  CHECK(std::abs(error - discarded) < 1e-6);
}

TEST_CASE("sample_distinct draws distinct rows reproducibly") {
  const auto a = pm::sample_distinct(20, 7, 3);
  CHECK(a == pm::sample_distinct(20, 7, 3));
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  CHECK(sorted.front() >= 0);
  CHECK(sorted.back() < 20);
}

TEST_CASE("k-means separates two distant pairs for any seed") {
  Eigen::MatrixXd m(4, 2);
  m << 0, 0, 0, 1, 50, 50, 50, 51;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = pm::kmeans(dataset(m), 2, seed);
    CHECK(pm::compact(r.partition) == pm::Partition{{0, 0, 1, 1}, 2});
  }
}

TEST_CASE("k-means with one cluster per point has zero inertia") {
  const auto data = dataset(oracle::blobs(9, 3, 3, 1.0, 5));
  const auto r = pm::kmeans(data, 9, 1);
  CHECK(r.inertia == doctest::Approx(0.0));
  CHECK(pm::compact(r.partition).k == 9);
}

TEST_CASE("k-means inertia never increases") {
  const auto& data = fixture_goal_data();
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto r = pm::kmeans(data, 25, seed);
    for (std::size_t i = 1; i < r.inertia_trace.size(); ++i) {
      CHECK(r.inertia_trace[i] <= r.inertia_trace[i - 1] + 1e-9);
    }
    CHECK(r.inertia == doctest::Approx(oracle::inertia(data.points, r.partition.assignment)));
  }
}

TEST_CASE("best of twenty k-means seeds matches an independent Lloyd implementation") {
  const Eigen::MatrixXd points = oracle::blobs(60, 2, 3, 1.0, 21);
  const auto data = dataset(points);
  auto best_of = [&](const std::function<std::vector<int>(std::uint64_t)>& fit) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> out;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto assignment = fit(seed);
      const double inertia = oracle::inertia(points, assignment);
      if (inertia < best) {
        best = inertia;
        out = assignment;
      }
    }
    return out;
  };
  const auto ours = best_of([&](std::uint64_t seed) { return pm::kmeans(data, 3, seed).partition.assignment; });
  const auto theirs = best_of([&](std::uint64_t seed) {
    return oracle::lloyd(points, pm::sample_distinct(60, 3, seed));
  });
  CHECK(agreement_up_to_relabel(ours, theirs) >= 0.95);
}

TEST_CASE("k-means recovers well separated Gaussians") {
  const auto data = dataset(oracle::blobs(60, 4, 3, 0.3, 21));
  std::vector<int> truth(60);
  for (int i = 0; i < 60; ++i) truth[static_cast<std::size_t>(i)] = i % 3;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> assignment;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = pm::kmeans(data, 3, seed);
    if (r.inertia < best) {
      best = r.inertia;
      assignment = r.partition.assignment;
    }
  }
  CHECK(agreement_up_to_relabel(assignment, truth) >= 0.95);
}

TEST_CASE("k larger than the dataset") {
  CHECK(code_of([] { pm::kmeans(column({1, 2}), 3, 0); }) == pm::ErrorCode::KTooLarge);
  CHECK(code_of([] { pm::gmm_em(column({1, 2}), 3, 0); }) == pm::ErrorCode::KTooLarge);
  CHECK(code_of([] { pm::farthest_first(column({1, 2}), 3, 0); }) == pm::ErrorCode::KTooLarge);
}

TEST_CASE("mixture with one component is the sample mean and variance") {
  const Eigen::MatrixXd points = oracle::blobs(30, 3, 2, 1.5, 8);
  const auto r = pm::gmm_em(dataset(points), 1, 4);
  const Eigen::RowVectorXd mean = points.colwise().mean();
  const Eigen::RowVectorXd var = (points.rowwise() - mean).array().square().colwise().mean();
  CHECK((r.model.means.row(0) - mean).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((r.model.variances.row(0) - var).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(r.model.weights(0) == doctest::Approx(1.0));
}

TEST_CASE("mixture separates two distant blobs like k-means") {
  const auto data = dataset(oracle::blobs(40, 2, 2, 0.5, 2));
  const auto em = pm::compact(pm::gmm_em(data, 2, 3).partition);
  const auto km = pm::compact(pm::kmeans(data, 2, 3).partition);
  CHECK(agreement_up_to_relabel(em.assignment, km.assignment) == 1.0);
}

TEST_CASE("mixture log-likelihood never decreases") {
  const auto& data = fixture_goal_data();
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    pm::GmmResult r;
    try {
      r = pm::gmm_em(data, 10, seed);
    } catch (const pm::Error& e) {
      CHECK(e.code() == pm::ErrorCode::DegenerateComponent);
      continue;
    }
    ++checked;
    for (std::size_t i = 1; i < r.ll_trace.size(); ++i) {
      const bool after_reseed = std::find(r.reseeded_at.begin(), r.reseeded_at.end(),
                                          static_cast<int>(i) - 1) != r.reseeded_at.end();
      if (after_reseed) continue;
      const double tol = 1e-9 * std::max(1.0, std::abs(r.ll_trace[i - 1]));
      CHECK(r.ll_trace[i] >= r.ll_trace[i - 1] - tol);
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("farthest-first picks the far point second") {
  const auto r = pm::farthest_first_from(column({0, 1, 10}), 2, 0);
  CHECK(r.centers == std::vector<int>{0, 2});
  CHECK(r.partition.assignment == std::vector<int>{0, 0, 1});
}

TEST_CASE("farthest-first with one center") {
  const auto r = pm::farthest_first(column({0, 1, 10}), 1, 9);
  CHECK(r.partition.assignment == std::vector<int>{0, 0, 0});
}

TEST_CASE("farthest-first centers maximise the distance to earlier centers") {
  const auto& data = fixture_goal_data();
  const auto r = pm::farthest_first(data, 5, 17);
  for (std::size_t step = 1; step < r.centers.size(); ++step) {
    auto min_distance = [&](Eigen::Index i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < step; ++c) {
        best = std::min(best, (data.points.row(i) - data.points.row(r.centers[c])).norm());
      }
      return best;
    };
    double top = 0.0;
    for (Eigen::Index i = 0; i < data.size(); ++i) top = std::max(top, min_distance(i));
    CHECK(min_distance(r.centers[step]) == top);
  }
}

TEST_CASE("silhouette of two distant tight pairs") {
  Eigen::MatrixXd m(4, 1);
  m << 0, 0.1, 100, 100.1;
  const auto s = pm::silhouette(dataset(m), {{0, 0, 1, 1}, 2});
  for (double v : s.scores) CHECK(v > 0.9);
}

TEST_CASE("silhouette of a point between two clusters is near zero") {
  Eigen::MatrixXd m(5, 1);
  m << -10, -10, 0, 10, 10;
  const auto s = pm::silhouette(dataset(m), {{0, 0, 0, 1, 1}, 2});
  CHECK(std::abs(s.scores[2]) < 0.35);
  CHECK(s.scores[2] < s.scores[0]);
}

TEST_CASE("silhouette matches the brute-force oracle") {
  const auto& data = fixture_goal_data();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto partition = pm::compact(pm::kmeans(data, 20, seed).partition);
    const auto s = pm::silhouette(data, partition);
    const auto expected = oracle::silhouette(data.points, partition.assignment);
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(std::abs(s.scores[i] - expected[i]) < 1e-9);
  }
}

TEST_CASE("silhouette errors") {
  const auto data = column({0, 1, 2});
  CHECK(code_of([&] { pm::silhouette(data, {{0, 0, 0}, 1}); }) == pm::ErrorCode::SingleCluster);
  CHECK(code_of([&] { pm::silhouette(data, {{0, 0, 0}, 2}); }) == pm::ErrorCode::EmptyCluster);
  CHECK(code_of([&] { pm::silhouette(data, {{0, 1}, 2}); }) == pm::ErrorCode::DimensionMismatch);
}

TEST_CASE("singletons score zero") {
  const auto s = pm::silhouette(column({0, 1, 10}), {{0, 0, 1}, 2});
  CHECK(s.scores[2] == 0.0);
}

}  // TEST_SUITE
