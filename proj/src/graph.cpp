#include "mvgc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mvgc {

namespace {

constexpr double kSymmetryTol = 1e-12;

void check_similarity(const SimilarityMatrix& a, const char* where) {
  const Matrix& m = a.data;
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::shape_mismatch, "similarity matrix is not square", where);
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::non_finite, "similarity matrix has non-finite entries", where);
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
    throw Error(ErrorCode::asymmetric_graph, "similarity matrix is not symmetric", where);
  }
  if (m.minCoeff() < 0.0) {
    throw Error(ErrorCode::invalid_argument, "similarity matrix has negative entries", where);
  }
}

// Entrywise a_ij * (s_i * s_j). The scale product commutes, so the result is
// bitwise symmetric whenever a is.
Matrix scale_symmetric(const Matrix& a, const Vector& s) {
  return a.cwiseProduct(s * s.transpose());
}

Vector inverse_sqrt_degrees(const Matrix& a, const char* where) {
  Vector d = a.rowwise().sum();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d[i] <= 0.0) {
      throw Error(ErrorCode::isolated_vertex,
                  "row " + std::to_string(i) + " has zero degree", where);
    }
  }
  return d.array().rsqrt();
}

}  // namespace

const char* to_string(Normalization mode) {
  switch (mode) {
    case Normalization::raw: return "raw";
    case Normalization::symmetric: return "symmetric";
    case Normalization::doubly_stochastic: return "doubly_stochastic";
  }
  return "unknown";
}

MultiViewGraphSet make_graph_set(std::vector<SimilarityMatrix> views) {
  if (views.empty()) {
    throw Error(ErrorCode::invalid_argument, "graph set needs at least one view", "graphs");
  }
  const Eigen::Index n = views.front().data.rows();
  const Normalization mode = views.front().normalization;
  for (std::size_t v = 0; v < views.size(); ++v) {
    check_similarity(views[v], "graphs");
    if (views[v].data.rows() != n) {
      throw Error(ErrorCode::shape_mismatch,
                  "view " + std::to_string(v) + " has mismatched sample count", "graphs");
    }
    if (views[v].normalization != mode) {
      throw Error(ErrorCode::invalid_argument,
                  "views mix normalization modes", "graphs");
    }
  }
  return MultiViewGraphSet{std::move(views), n};
}

SimilarityMatrix gaussian_similarity(const FeatureMatrix& x, std::optional<double> sigma) {
  const Matrix& pts = x.data;
  const Eigen::Index n = pts.rows();
  if (n < 1) {
    throw Error(ErrorCode::invalid_argument, "empty feature matrix", "graphs");
  }
  if (!pts.allFinite()) {
    throw Error(ErrorCode::non_finite, "feature matrix has non-finite entries", "graphs");
  }
  if (sigma && *sigma <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "sigma must be positive", "graphs");
  }

  Matrix sq(n, n);
  sq.setZero();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d2 = (pts.row(i) - pts.row(j)).squaredNorm();
      sq(i, j) = d2;
      sq(j, i) = d2;
    }
  }

  double s = 0.0;
  if (sigma) {
    s = *sigma;
  } else {
    if (n < 2) {
      throw Error(ErrorCode::degenerate_scale, "auto sigma needs at least two samples",
                  "graphs");
    }
    std::vector<double> dist;
    dist.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (sq(i, j) > 0.0) dist.push_back(std::sqrt(sq(i, j)));
      }
    }
    if (dist.empty()) {
      throw Error(ErrorCode::degenerate_scale,
                  "all pairwise distances are zero; auto sigma undefined", "graphs");
    }
    std::sort(dist.begin(), dist.end());
    const std::size_t mid = dist.size() / 2;
    s = (dist.size() % 2 == 1) ? dist[mid] : 0.5 * (dist[mid - 1] + dist[mid]);
  }

  SimilarityMatrix out;
  out.data = (-sq / (2.0 * s * s)).array().exp();
  out.data.diagonal().setOnes();
  out.normalization = Normalization::raw;
  return out;
}

SimilarityMatrix knn_sparsify(const SimilarityMatrix& a, int k) {
  check_similarity(a, "graphs");
  const Eigen::Index n = a.data.rows();
  if (k < 1 || k > n - 1) {
    throw Error(ErrorCode::k_out_of_range,
                "k must lie in [1, n-1], got " + std::to_string(k), "graphs");
  }

  Matrix b = Matrix::Zero(n, n);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    order.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    // Ties go to the lowest column index.
    std::sort(order.begin(), order.end(), [&](Eigen::Index p, Eigen::Index q) {
      if (a.data(i, p) != a.data(i, q)) return a.data(i, p) > a.data(i, q);
      return p < q;
    });
    for (int t = 0; t < k; ++t) b(i, order[static_cast<std::size_t>(t)]) = a.data(i, order[static_cast<std::size_t>(t)]);
  }

  SimilarityMatrix out;
  out.data = 0.5 * (b + b.transpose());
  out.data.diagonal().setZero();
  out.normalization = Normalization::raw;
  return out;
}

SimilarityMatrix symmetric_normalize(const SimilarityMatrix& a) {
  check_similarity(a, "graphs");
  const Vector s = inverse_sqrt_degrees(a.data, "graphs");
  SimilarityMatrix out;
  out.data = scale_symmetric(a.data, s);
  out.normalization = Normalization::symmetric;
  return out;
}

SimilarityMatrix doubly_stochastic(const SimilarityMatrix& a, double tol, int max_iter) {
  check_similarity(a, "graphs");
  if (tol <= 0.0 || max_iter < 1) {
    throw Error(ErrorCode::invalid_argument, "tol must be > 0 and max_iter >= 1", "graphs");
  }

  Matrix m = a.data;
  double deviation = (m.rowwise().sum().array() - 1.0).abs().maxCoeff();
  for (int it = 0; it < max_iter && deviation > tol; ++it) {
    const Vector s = inverse_sqrt_degrees(m, "graphs");
    m = scale_symmetric(m, s);
    deviation = (m.rowwise().sum().array() - 1.0).abs().maxCoeff();
  }
  if (deviation > 10.0 * tol) {
    throw Error(ErrorCode::no_convergence,
                "balancing stalled at deviation " + std::to_string(deviation), "graphs");
  }

  SimilarityMatrix out;
  out.data = std::move(m);
  out.normalization = Normalization::doubly_stochastic;
  out.balance_tol = deviation;
  return out;
}

Matrix laplacian(const SimilarityMatrix& a) {
  check_similarity(a, "graphs");
  const Vector s = inverse_sqrt_degrees(a.data, "graphs");
  Matrix l = -scale_symmetric(a.data, s);
  l.diagonal().array() += 1.0;
  return l;
}

}  // namespace mvgc
