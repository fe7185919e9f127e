#pragma once

#include "mvgc/solver.hpp"

namespace mvgc::detail {

// Shared block-descent loop for the plain model and its graph-regularized
// extension. offset, when non-null, is subtracted from the blended affinity
// (the regularized model's gamma_hat * L_g); the same code path with a null
// offset is the plain model, which keeps the gamma_hat = 0 reduction
// bit-identical.
SolverState run_block_descent(const MultiViewGraphSet& views, const Matrix* offset,
                              const SolverConfig& config, const IterationCallback& cb);

// Gaussian init followed by QR orthonormalization; G is additionally clamped
// at zero so it starts inside its feasible set.
EmbeddingPair random_init(Eigen::Index n, Eigen::Index m, std::uint64_t seed);

Matrix gram_of_views(const MultiViewGraphSet& views);

void validate_config(const MultiViewGraphSet& views, const SolverConfig& config);

Eigen::Index embedding_dim(const SolverConfig& config);

}  // namespace mvgc::detail
