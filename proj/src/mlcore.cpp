#include "proofminer/mlcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace proofminer {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void check_k(const Dataset& data, int k) {
  if (k < 1) throw Error(ErrorCode::OutOfRange, "cluster count must be positive");
  if (k > data.size()) {
    throw Error(ErrorCode::KTooLarge, "cluster count " + std::to_string(k) +
                                          " exceeds " + std::to_string(data.size()) +
                                          " points");
  }
}

int nearest_row(const Eigen::MatrixXd& centers, const Eigen::RowVectorXd& point,
                double* best_distance = nullptr) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < centers.rows(); ++c) {
    const double d = (centers.row(c) - point).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  if (best_distance) *best_distance = best_d;
  return best;
}

}  // namespace

Dataset Dataset::from_vectors(const std::vector<FeatureVector>& vectors) {
  Dataset out;
  if (vectors.empty()) return out;
  const auto d = vectors.front().values.size();
  out.points.resize(static_cast<Eigen::Index>(vectors.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto& v = vectors[i];
    if (v.values.size() != d) {
      throw Error(ErrorCode::DimensionMismatch,
                  "vector '" + v.lemma_name + "' has " + std::to_string(v.values.size()) +
                      " entries, expected " + std::to_string(d));
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::isfinite(v.values[j])) {
        throw Error(ErrorCode::DimensionMismatch, "vector '" + v.lemma_name + "' is not finite");
      }
      out.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v.values[j];
    }
    out.labels.push_back(v.lemma_name);
  }
  return out;
}

Partition compact(const Partition& partition) {
  std::vector<int> remap(static_cast<std::size_t>(partition.k), -1);
  Partition out;
  out.assignment.reserve(partition.assignment.size());
  for (int c : partition.assignment) {
    auto& slot = remap[static_cast<std::size_t>(c)];
    if (slot < 0) slot = out.k++;
    out.assignment.push_back(slot);
  }
  return out;
}

// ---------------------------------------------------------------------------

Standardized standardize(const Dataset& data) {
  if (data.size() < 2) {
    throw Error(ErrorCode::TooFewPoints, "standardization needs at least two points");
  }
  const auto n = static_cast<double>(data.size());
  Standardized out;
  out.scaler.mean = data.points.colwise().mean();
  const Eigen::MatrixXd centered = data.points.rowwise() - out.scaler.mean;
  out.scaler.stddev = (centered.array().square().colwise().sum() / n).sqrt().matrix();
  out.data.labels = data.labels;
  out.data.points = Eigen::MatrixXd::Zero(data.size(), data.dims());
  for (Eigen::Index j = 0; j < data.dims(); ++j) {
    const double sd = out.scaler.stddev(j);
    if (sd <= 1e-12 * std::max(1.0, std::abs(out.scaler.mean(j)))) {
      out.scaler.stddev(j) = 0.0;
      continue;
    }
    out.data.points.col(j) = centered.col(j) / sd;
  }
  return out;
}

// ---------------------------------------------------------------------------

PcaResult pca_fit_transform(const Dataset& data, double variance_target) {
  if (!(variance_target > 0.0 && variance_target <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "variance target must be in (0, 1]");
  }
  if (data.size() < 1 || data.dims() < 1) {
    throw Error(ErrorCode::TooFewPoints, "PCA needs a non-empty dataset");
  }
  const auto n = static_cast<double>(data.size());
  const auto d = data.dims();
  PcaResult out;
  out.model.mean = data.points.colwise().mean();
  const Eigen::MatrixXd centered = data.points.rowwise() - out.model.mean;
  const Eigen::MatrixXd covariance = (centered.transpose() * centered) / n;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  const Eigen::VectorXd ascending = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  out.model.eigenvalues.resize(d);
  Eigen::MatrixXd ordered(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    out.model.eigenvalues(i) = std::max(0.0, ascending(d - 1 - i));
    Eigen::VectorXd column = vectors.col(d - 1 - i);
    Eigen::Index pivot = 0;
    column.cwiseAbs().maxCoeff(&pivot);
    if (column(pivot) < 0) column = -column;
    ordered.col(i) = column;
  }

  const double total = out.model.eigenvalues.sum();
  Eigen::Index keep = 1;
  if (total > 0) {
    double cumulative = 0.0;
    for (keep = 0; keep < d;) {
      cumulative += out.model.eigenvalues(keep);
      ++keep;
      if (cumulative / total >= variance_target - 1e-12) break;
    }
  }
  out.model.components = ordered.leftCols(keep);
  out.model.explained_ratio = total > 0 ? Eigen::VectorXd(out.model.eigenvalues.head(keep) / total)
                                        : Eigen::VectorXd::Zero(keep);
  out.data.labels = data.labels;
  out.data.points = centered * out.model.components;
  return out;
}

Eigen::MatrixXd pca_inverse_transform(const PcaModel& model, const Eigen::MatrixXd& projected) {
  return (projected * model.components.transpose()).rowwise() + model.mean;
}

// ---------------------------------------------------------------------------

std::vector<int> sample_distinct(int n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(pick(rng))]);
  }
  rows.resize(static_cast<std::size_t>(k));
  return rows;
}

KMeansResult kmeans_from(const Dataset& data, const std::vector<int>& initial_rows) {
  const int k = static_cast<int>(initial_rows.size());
  check_k(data, k);
  const auto n = data.size();

  KMeansResult out;
  out.centroids.resize(k, data.dims());
  for (int c = 0; c < k; ++c) out.centroids.row(c) = data.points.row(initial_rows[static_cast<std::size_t>(c)]);
  out.partition.k = k;
  out.partition.assignment.assign(static_cast<std::size_t>(n), -1);

  std::vector<double> distance(static_cast<std::size_t>(n));
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    std::vector<int> next(static_cast<std::size_t>(n));
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      next[ui] = nearest_row(out.centroids, data.points.row(i), &distance[ui]);
      ++sizes[static_cast<std::size_t>(next[ui])];
    }
    // An empty cluster takes over the point farthest from its own centroid.
    for (int c = 0; c < k; ++c) {
      if (sizes[static_cast<std::size_t>(c)] > 0) continue;
      int far = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if (sizes[static_cast<std::size_t>(next[ui])] < 2) continue;
        if (far < 0 || distance[ui] > distance[static_cast<std::size_t>(far)]) far = static_cast<int>(i);
      }
      if (far < 0) break;
      --sizes[static_cast<std::size_t>(next[static_cast<std::size_t>(far)])];
      next[static_cast<std::size_t>(far)] = c;
      distance[static_cast<std::size_t>(far)] = 0.0;
      sizes[static_cast<std::size_t>(c)] = 1;
    }

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, data.dims());
    for (Eigen::Index i = 0; i < n; ++i) sums.row(next[static_cast<std::size_t>(i)]) += data.points.row(i);
    for (int c = 0; c < k; ++c) {
      if (sizes[static_cast<std::size_t>(c)] > 0) {
        out.centroids.row(c) = sums.row(c) / static_cast<double>(sizes[static_cast<std::size_t>(c)]);
      }
    }

    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      inertia += (data.points.row(i) - out.centroids.row(next[static_cast<std::size_t>(i)])).squaredNorm();
    }
    out.inertia_trace.push_back(inertia);
    out.inertia = inertia;
    out.iterations = iter + 1;

    const bool fixpoint = next == out.partition.assignment;
    out.partition.assignment = std::move(next);
    if (fixpoint) break;
  }
  return out;
}

KMeansResult kmeans(const Dataset& data, int k, std::uint64_t seed) {
  check_k(data, k);
  return kmeans_from(data, sample_distinct(static_cast<int>(data.size()), k, seed));
}

// ---------------------------------------------------------------------------

GmmResult gmm_em(const Dataset& data, int k, std::uint64_t seed) {
  check_k(data, k);
  const auto n = data.size();
  const auto d = data.dims();

  const Eigen::RowVectorXd global_mean = data.points.colwise().mean();
  Eigen::RowVectorXd global_var =
      ((data.points.rowwise() - global_mean).array().square().colwise().sum() /
       static_cast<double>(n))
          .matrix();
  global_var = global_var.cwiseMax(kVarianceFloor);

  GmmResult out;
  auto& model = out.model;
  model.weights = Eigen::VectorXd::Constant(k, 1.0 / k);
  model.means.resize(k, d);
  model.variances.resize(k, d);
  const auto initial = sample_distinct(static_cast<int>(n), k, seed);
  for (int c = 0; c < k; ++c) {
    model.means.row(c) = data.points.row(initial[static_cast<std::size_t>(c)]);
    model.variances.row(c) = global_var;
  }

  Eigen::MatrixXd resp(n, k);
  Eigen::VectorXd point_ll(n);
  std::vector<bool> reseeded(static_cast<std::size_t>(k), false);

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    // E-step in log space.
    for (int c = 0; c < k; ++c) {
      const Eigen::RowVectorXd var = model.variances.row(c);
      const double log_norm = -0.5 * (d * kLog2Pi + var.array().log().sum());
      const double log_weight = std::log(model.weights(c));
      for (Eigen::Index i = 0; i < n; ++i) {
        const double maha =
            ((data.points.row(i) - model.means.row(c)).array().square() / var.array()).sum();
        resp(i, c) = log_weight + log_norm - 0.5 * maha;
      }
    }
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double top = resp.row(i).maxCoeff();
      const double lse = top + std::log((resp.row(i).array() - top).exp().sum());
      point_ll(i) = lse;
      resp.row(i) = (resp.row(i).array() - lse).exp();
      ll += lse;
    }
    out.ll_trace.push_back(ll);
    out.log_likelihood = ll;
    out.iterations = iter + 1;
    if (iter > 0) {
      const double previous = out.ll_trace[out.ll_trace.size() - 2];
      if (ll - previous < 1e-10 * std::max(1.0, std::abs(ll)) &&
          (out.reseeded_at.empty() || out.reseeded_at.back() != iter - 1)) {
        break;
      }
    }
    if (iter + 1 == kMaxIterations) break;

    // M-step with the variance floor.
    for (int c = 0; c < k; ++c) {
      const double mass = resp.col(c).sum();
      if (mass < 1e-10) {
        if (reseeded[static_cast<std::size_t>(c)]) {
          throw Error(ErrorCode::DegenerateComponent,
                      "mixture component " + std::to_string(c) + " collapsed twice");
        }
        reseeded[static_cast<std::size_t>(c)] = true;
        Eigen::Index worst = 0;
        point_ll.minCoeff(&worst);
        model.means.row(c) = data.points.row(worst);
        model.variances.row(c) = global_var;
        model.weights(c) = 1.0 / static_cast<double>(n);
        out.reseeded_at.push_back(iter);
        continue;
      }
      model.weights(c) = mass / static_cast<double>(n);
      const Eigen::RowVectorXd mean = (resp.col(c).transpose() * data.points) / mass;
      model.means.row(c) = mean;
      Eigen::RowVectorXd var = Eigen::RowVectorXd::Zero(d);
      for (Eigen::Index i = 0; i < n; ++i) {
        var += resp(i, c) * (data.points.row(i) - mean).array().square().matrix();
      }
      model.variances.row(c) = (var / mass).cwiseMax(kVarianceFloor);
    }
    model.weights /= model.weights.sum();
  }

  out.partition.k = k;
  out.partition.assignment.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    resp.row(i).maxCoeff(&best);
    out.partition.assignment[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

// ---------------------------------------------------------------------------

FarthestFirstResult farthest_first_from(const Dataset& data, int k, int first_center) {
  check_k(data, k);
  const auto n = data.size();
  if (first_center < 0 || first_center >= n) {
    throw Error(ErrorCode::OutOfRange, "first center outside the dataset");
  }
  FarthestFirstResult out;
  out.centers.push_back(first_center);
  Eigen::VectorXd min_distance(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    min_distance(i) = (data.points.row(i) - data.points.row(first_center)).norm();
  }
  while (static_cast<int>(out.centers.size()) < k) {
    Eigen::Index next = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (min_distance(i) > min_distance(next)) next = i;
    }
    out.centers.push_back(static_cast<int>(next));
    for (Eigen::Index i = 0; i < n; ++i) {
      min_distance(i) = std::min(min_distance(i), (data.points.row(i) - data.points.row(next)).norm());
    }
  }

  Eigen::MatrixXd centers(k, data.dims());
  for (int c = 0; c < k; ++c) centers.row(c) = data.points.row(out.centers[static_cast<std::size_t>(c)]);
  out.partition.k = k;
  out.partition.assignment.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    out.partition.assignment[static_cast<std::size_t>(i)] = nearest_row(centers, data.points.row(i));
  }
  return out;
}

FarthestFirstResult farthest_first(const Dataset& data, int k, std::uint64_t seed) {
  check_k(data, k);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(data.size()) - 1);
  return farthest_first_from(data, k, pick(rng));
}

// ---------------------------------------------------------------------------

SilhouetteResult silhouette(const Dataset& data, const Partition& partition) {
  const auto n = data.size();
  if (static_cast<Eigen::Index>(partition.assignment.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "partition does not match the dataset");
  }
  if (partition.k < 2) throw Error(ErrorCode::SingleCluster, "silhouette needs two clusters");
  const auto k = static_cast<std::size_t>(partition.k);
  std::vector<int> sizes(k, 0);
  for (int c : partition.assignment) {
    if (c < 0 || c >= partition.k) throw Error(ErrorCode::OutOfRange, "cluster index out of range");
    ++sizes[static_cast<std::size_t>(c)];
  }
  if (std::any_of(sizes.begin(), sizes.end(), [](int s) { return s == 0; })) {
    throw Error(ErrorCode::EmptyCluster, "silhouette needs non-empty clusters");
  }

  SilhouetteResult out;
  out.scores.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double> sums(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      sums[static_cast<std::size_t>(partition.assignment[static_cast<std::size_t>(j)])] +=
          (data.points.row(i) - data.points.row(j)).norm();
    }
    const auto own = static_cast<std::size_t>(partition.assignment[static_cast<std::size_t>(i)]);
    if (sizes[own] == 1) continue;
    const double a = sums[own] / (sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != own) b = std::min(b, sums[c] / sizes[c]);
    }
    const double scale = std::max(a, b);
    out.scores[static_cast<std::size_t>(i)] = scale > 0 ? (b - a) / scale : 0.0;
  }

  out.cluster_means.assign(k, 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(partition.assignment[static_cast<std::size_t>(i)]);
    out.cluster_means[c] += out.scores[static_cast<std::size_t>(i)];
  }
  for (std::size_t c = 0; c < k; ++c) out.cluster_means[c] /= sizes[c];
  return out;
}

}  // namespace proofminer
