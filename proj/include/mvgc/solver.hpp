#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mvgc/graph.hpp"
#include "mvgc/simplex_qp.hpp"

namespace mvgc {

/// The two coupled factors of the model: an orthonormal embedding (F'F = I)
/// and a relaxed nonnegative soft indicator tied to it by the mu penalty.
struct EmbeddingPair {
  Matrix embedding;       // n x m, orthonormal columns
  Matrix soft_indicator;  // n x m, entrywise >= 0
};

/// Simplex-constrained blending coefficients over views.
struct ViewWeights {
  Vector weights;
};

struct SolverConfig {
  double mu = 1.0;
  int clusters = 2;
  int embedding_dim = 0;  // 0 -> clusters
  int max_iter = 100;
  double tol = 1e-6;      // relative objective-change threshold
  std::uint64_t seed = 0;
  double ridge_eps = 1e-10;  // ridge for the view-weight QP
};

struct SolverState {
  EmbeddingPair embedding;
  ViewWeights weights;
  std::vector<double> objective_trace;  // one entry per completed outer iteration
  int iterations = 0;
  bool converged = false;
};

/// Invoked after each completed outer iteration; used by diagnostics and the
/// acceptance suite to inspect per-iteration constraint satisfaction.
using IterationCallback =
    std::function<void(int iteration, const EmbeddingPair&, const ViewWeights&,
                       double objective)>;

/// The blended affinity sum over views with the given weights.
Matrix blended_graph(const MultiViewGraphSet& views, const Vector& weights);

/// |sum_v a_v A_v - F G'|_F^2 + mu |F - G|_F^2.
double objective(const MultiViewGraphSet& views, const EmbeddingPair& e,
                 const ViewWeights& w, double mu);

/// argmax_{F'F=I} tr(F'M) = U V' from the thin SVD M = U S V'.
Matrix orthogonal_procrustes(const Matrix& m);

/// Procrustes step on M = (sum_v a_v A_v) G + mu G.
Matrix update_f(const MultiViewGraphSet& views, const Matrix& g, const ViewWeights& w,
                double mu);

/// Entrywise clamp of P = ((sum_v a_v A_v + mu I) / (1 + mu)) F at zero.
Matrix update_g(const MultiViewGraphSet& views, const Matrix& f, const ViewWeights& w,
                double mu);

/// Simplex-constrained least-squares fit of the view weights against F G',
/// solved in Gram form (the n^2-row design matrix is never materialized).
ViewWeights update_alpha(const MultiViewGraphSet& views, const EmbeddingPair& e,
                         double ridge_eps);

/// Block-coordinate descent over F, G and the view weights, in that order,
/// until the relative objective change drops below tol or max_iter is hit.
/// Deterministic for a fixed seed.
SolverState solve(const MultiViewGraphSet& views, const SolverConfig& config,
                  const IterationCallback& on_iteration = {});

}  // namespace mvgc
