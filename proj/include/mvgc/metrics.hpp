#pragma once

#include <vector>

#include "mvgc/types.hpp"

namespace mvgc {

/// Cluster labels, one entry per sample, values in [0, c).
using LabelVector = std::vector<int>;

/// Minimum-cost perfect assignment on a square cost matrix; returns the
/// column matched to each row. Exact (Kuhn-Munkres with potentials).
std::vector<int> hungarian(const Matrix& cost);

/// Clustering accuracy: fraction of samples matched under the best
/// label-to-label assignment between pred and truth.
double accuracy(const LabelVector& pred, const LabelVector& truth);

/// Pair-counting F1 over all unordered sample pairs: TP = same cluster in
/// both, FP = same in pred only, FN = same in truth only.
double pairwise_f1(const LabelVector& pred, const LabelVector& truth);

}  // namespace mvgc
