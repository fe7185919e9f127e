#include "mvgc/metrics.hpp"

#include <algorithm>
#include <limits>

namespace mvgc {

namespace {

int label_count(const LabelVector& labels, const char* where) {
  int c = 0;
  for (int v : labels) {
    if (v < 0) throw Error(ErrorCode::invalid_argument, "negative label", where);
    c = std::max(c, v + 1);
  }
  return c;
}

void check_pair(const LabelVector& pred, const LabelVector& truth, const char* where) {
  if (pred.size() != truth.size()) {
    throw Error(ErrorCode::length_mismatch, "label vectors differ in length", where);
  }
  if (pred.empty()) {
    throw Error(ErrorCode::invalid_argument, "empty label vectors", where);
  }
}

}  // namespace

std::vector<int> hungarian(const Matrix& cost) {
  if (cost.rows() != cost.cols() || cost.rows() < 1) {
    throw Error(ErrorCode::dimension_mismatch, "cost matrix must be square", "metrics");
  }
  if (!cost.allFinite()) {
    throw Error(ErrorCode::non_finite, "cost matrix has non-finite entries", "metrics");
  }
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();

  // Potentials u, v; p[j] = row matched to column j (1-based, 0 = free).
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> match(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) match[static_cast<std::size_t>(p[j] - 1)] = j - 1;
  }
  return match;
}

double accuracy(const LabelVector& pred, const LabelVector& truth) {
  check_pair(pred, truth, "metrics");
  const int cp = label_count(pred, "metrics");
  const int ct = label_count(truth, "metrics");
  const int s = std::max(cp, ct);

  Matrix counts = Matrix::Zero(s, s);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    counts(pred[i], truth[i]) += 1.0;
  }
  const std::vector<int> match = hungarian(-counts);
  double hits = 0.0;
  for (int i = 0; i < s; ++i) hits += counts(i, match[static_cast<std::size_t>(i)]);
  return hits / static_cast<double>(pred.size());
}

double pairwise_f1(const LabelVector& pred, const LabelVector& truth) {
  check_pair(pred, truth, "metrics");
  if (pred.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "pairwise F1 needs at least two samples",
                "metrics");
  }
  long long tp = 0, fp = 0, fn = 0;
  const std::size_t n = pred.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool same_pred = pred[i] == pred[j];
      const bool same_truth = truth[i] == truth[j];
      if (same_pred && same_truth) ++tp;
      else if (same_pred) ++fp;
      else if (same_truth) ++fn;
    }
  }
  const long long denom = 2 * tp + fp + fn;
  // Two all-singleton clusterings agree on every pair.
  if (denom == 0) return 1.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

}  // namespace mvgc
