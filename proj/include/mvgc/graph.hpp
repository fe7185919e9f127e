#pragma once

#include <optional>
#include <vector>

#include "mvgc/types.hpp"

namespace mvgc {

enum class Normalization { raw, symmetric, doubly_stochastic };

const char* to_string(Normalization mode);

/// Dense feature block, one row per sample, one column per feature.
struct FeatureMatrix {
  Matrix data;
  int view_id = 0;
};

/// Symmetric nonnegative affinity matrix. balance_tol records the largest
/// row/column-sum deviation left by doubly-stochastic balancing; it is 0 for
/// the other normalization modes.
struct SimilarityMatrix {
  Matrix data;
  Normalization normalization = Normalization::raw;
  double balance_tol = 0.0;
};

/// A bundle of per-view affinity matrices over the same n samples.
struct MultiViewGraphSet {
  std::vector<SimilarityMatrix> views;
  Eigen::Index n = 0;
};

/// Validates shared n, shared normalization mode, and per-view symmetry /
/// nonnegativity before bundling.
MultiViewGraphSet make_graph_set(std::vector<SimilarityMatrix> views);

/// Gaussian kernel affinity A_ij = exp(-|x_i - x_j|^2 / (2 sigma^2)) with a
/// unit diagonal. sigma = nullopt selects the median pairwise distance
/// (zeros excluded).
SimilarityMatrix gaussian_similarity(const FeatureMatrix& x,
                                     std::optional<double> sigma = std::nullopt);

/// Keeps the k largest off-diagonal entries per row (ties broken toward the
/// lowest column index), zeroes the diagonal, then symmetrizes as (B + B')/2.
SimilarityMatrix knn_sparsify(const SimilarityMatrix& a, int k);

/// D^{-1/2} A D^{-1/2} with D = diag(row sums).
SimilarityMatrix symmetric_normalize(const SimilarityMatrix& a);

/// Symmetric Sinkhorn balancing: repeat A <- D^{-1/2} A D^{-1/2} until every
/// row sum is within tol of 1 or max_iter is hit.
SimilarityMatrix doubly_stochastic(const SimilarityMatrix& a, double tol = 1e-8,
                                   int max_iter = 1000);

/// Normalized graph Laplacian I - D^{-1/2} A D^{-1/2}.
Matrix laplacian(const SimilarityMatrix& a);

}  // namespace mvgc
