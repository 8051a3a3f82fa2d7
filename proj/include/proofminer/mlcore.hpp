#pragma once

// Standardization, PCA and the clustering engines (K-means, diagonal
// Gaussian mixture EM, FarthestFirst) plus silhouette scoring. Every routine
// is a pure function of its inputs and seed.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "proofminer/model.hpp"

namespace proofminer {

struct Dataset {
  Eigen::MatrixXd points;  // n x d, one row per lemma
  std::vector<std::string> labels;

  /// Throws Error(DimensionMismatch) on ragged input or non-finite values.
  static Dataset from_vectors(const std::vector<FeatureVector>& vectors);

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dims() const { return points.cols(); }
};

struct Partition {
  std::vector<int> assignment;
  int k = 0;

  bool operator==(const Partition&) const = default;
};

/// Drops empty clusters and renumbers the rest in order of first appearance.
Partition compact(const Partition& partition);

// Standardization ------------------------------------------------------------

struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd stddev;  // population stddev; 0 marks a constant column
};

struct Standardized {
  Dataset data;
  Standardizer scaler;
};

/// Column z-scores; zero-variance columns become all zeros.
Standardized standardize(const Dataset& data);

// PCA ----------------------------------------------------------------------

struct PcaModel {
  Eigen::RowVectorXd mean;
  Eigen::MatrixXd components;          // d x r, orthonormal columns
  Eigen::VectorXd eigenvalues;         // all d, descending
  Eigen::VectorXd explained_ratio;     // the r kept components
};

struct PcaResult {
  Dataset data;
  PcaModel model;
};

/// Keeps the fewest leading components whose cumulative explained variance
/// reaches `variance_target`.
PcaResult pca_fit_transform(const Dataset& data, double variance_target = 0.95);

Eigen::MatrixXd pca_inverse_transform(const PcaModel& model, const Eigen::MatrixXd& projected);

// Clustering ---------------------------------------------------------------

inline constexpr int kMaxIterations = 300;

struct KMeansResult {
  Partition partition;
  Eigen::MatrixXd centroids;
  double inertia = 0.0;
  std::vector<double> inertia_trace;  // after every Lloyd iteration
  int iterations = 0;
};

/// k distinct row indices drawn uniformly with the seeded generator.
std::vector<int> sample_distinct(int n, int k, std::uint64_t seed);

KMeansResult kmeans(const Dataset& data, int k, std::uint64_t seed);
KMeansResult kmeans_from(const Dataset& data, const std::vector<int>& initial_rows);

struct GaussianMixture {
  Eigen::VectorXd weights;
  Eigen::MatrixXd means;      // k x d
  Eigen::MatrixXd variances;  // k x d, diagonal covariances
};

inline constexpr double kVarianceFloor = 1e-6;

struct GmmResult {
  Partition partition;
  GaussianMixture model;
  double log_likelihood = 0.0;
  std::vector<double> ll_trace;     // after every E-step
  std::vector<int> reseeded_at;     // iteration indices where a component was reseeded
  int iterations = 0;
};

GmmResult gmm_em(const Dataset& data, int k, std::uint64_t seed);

struct FarthestFirstResult {
  Partition partition;
  std::vector<int> centers;  // row indices in selection order
};

FarthestFirstResult farthest_first(const Dataset& data, int k, std::uint64_t seed);
FarthestFirstResult farthest_first_from(const Dataset& data, int k, int first_center);

struct SilhouetteResult {
  std::vector<double> scores;          // per point
  std::vector<double> cluster_means;   // per cluster
};

/// Euclidean silhouette; singleton clusters score 0.
SilhouetteResult silhouette(const Dataset& data, const Partition& partition);

}  // namespace proofminer
