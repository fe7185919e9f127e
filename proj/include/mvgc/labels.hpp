#pragma once

#include <cstdint>
#include <utility>

#include "mvgc/metrics.hpp"
#include "mvgc/solver.hpp"

namespace mvgc {

struct KMeansModel {
  Matrix centroids;  // c x m
  double inertia = 0.0;
  std::uint64_t seed = 0;
};

enum class AssignMethod { argmax_g, kmeans_f };

/// Lloyd iterations with k-means++ seeding, best of `restarts` runs by
/// inertia (ties broken by restart index). Empty clusters are repaired by
/// stealing the point farthest from its centroid. inertia_trace, when given,
/// receives the winning run's per-iteration inertia.
std::pair<LabelVector, KMeansModel> kmeans(const Matrix& points, int c,
                                           std::uint64_t seed, int restarts = 10,
                                           int max_iter = 100,
                                           std::vector<double>* inertia_trace = nullptr);

/// Reads labels out of a solved embedding. argmax_g takes the row-wise argmax
/// of the nonnegative factor (needs m = c); kmeans_f clusters the
/// row-normalized orthonormal factor.
LabelVector assign_from_embedding(const EmbeddingPair& e, int c, AssignMethod method,
                                  std::uint64_t seed);

/// Frozen nearest-centroid labeler for mapping new embedding rows onto the
/// clusters found at train time.
struct CentroidAssigner {
  Matrix centroids;  // c x m
  LabelVector assign(const Matrix& rows) const;
};

/// Centroids are the per-cluster means of the training embedding rows under
/// the training labels; clusters with no members get zero centroids.
CentroidAssigner fit_centroid_assigner(const Matrix& embedding, const LabelVector& labels,
                                       int c);

}  // namespace mvgc
