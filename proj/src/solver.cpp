#include "mvgc/solver.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "solver_core.hpp"

namespace mvgc {

namespace {

void check_embedding_dims(const MultiViewGraphSet& views, Eigen::Index rows,
                          Eigen::Index rows2) {
  if (rows != views.n || rows2 != views.n) {
    throw Error(ErrorCode::dimension_mismatch, "factor row count differs from graph size",
                "solver");
  }
}

Matrix orthonormal_columns(const Matrix& x) {
  Eigen::HouseholderQR<Matrix> qr(x);
  return qr.householderQ() * Matrix::Identity(x.rows(), x.cols());
}

// One F stage against an already-blended (and possibly offset) affinity.
Matrix stage_f(const Matrix& blended, const Matrix& g, double mu) {
  return orthogonal_procrustes(blended * g + mu * g);
}

// One G stage: clamp of ((blended + mu I) / (1 + mu)) F, evaluated as
// (blended F + mu F) / (1 + mu) so both solvers share the exact arithmetic.
Matrix stage_g(const Matrix& blended, const Matrix& f, double mu) {
  return ((blended * f + mu * f) / (1.0 + mu)).cwiseMax(0.0);
}

double surrogate_objective(const Matrix& blended, const Matrix& f, const Matrix& g,
                           double mu) {
  return (blended - f * g.transpose()).squaredNorm() + mu * (f - g).squaredNorm();
}

Vector view_targets(const MultiViewGraphSet& views, const Matrix& reference) {
  Vector t(static_cast<Eigen::Index>(views.views.size()));
  for (std::size_t v = 0; v < views.views.size(); ++v) {
    t[static_cast<Eigen::Index>(v)] = views.views[v].data.cwiseProduct(reference).sum();
  }
  return t;
}

}  // namespace

Matrix blended_graph(const MultiViewGraphSet& views, const Vector& weights) {
  if (weights.size() != static_cast<Eigen::Index>(views.views.size())) {
    throw Error(ErrorCode::dimension_mismatch, "weight count differs from view count",
                "solver");
  }
  Matrix s = Matrix::Zero(views.n, views.n);
  for (std::size_t v = 0; v < views.views.size(); ++v) {
    s += weights[static_cast<Eigen::Index>(v)] * views.views[v].data;
  }
  return s;
}

double objective(const MultiViewGraphSet& views, const EmbeddingPair& e,
                 const ViewWeights& w, double mu) {
  check_embedding_dims(views, e.embedding.rows(), e.soft_indicator.rows());
  if (e.embedding.cols() != e.soft_indicator.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "factor column counts disagree", "solver");
  }
  return surrogate_objective(blended_graph(views, w.weights), e.embedding,
                             e.soft_indicator, mu);
}

Matrix orthogonal_procrustes(const Matrix& m) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::non_finite, "procrustes input has non-finite entries", "solver");
  }
  if (m.rows() < m.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "procrustes input needs rows >= cols",
                "solver");
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().transpose();
}

Matrix update_f(const MultiViewGraphSet& views, const Matrix& g, const ViewWeights& w,
                double mu) {
  check_embedding_dims(views, g.rows(), g.rows());
  return stage_f(blended_graph(views, w.weights), g, mu);
}

Matrix update_g(const MultiViewGraphSet& views, const Matrix& f, const ViewWeights& w,
                double mu) {
  check_embedding_dims(views, f.rows(), f.rows());
  if (mu <= -1.0) {
    throw Error(ErrorCode::invalid_argument, "mu must exceed -1", "solver");
  }
  return stage_g(blended_graph(views, w.weights), f, mu);
}

ViewWeights update_alpha(const MultiViewGraphSet& views, const EmbeddingPair& e,
                         double ridge_eps) {
  check_embedding_dims(views, e.embedding.rows(), e.soft_indicator.rows());
  const Matrix reference = e.embedding * e.soft_indicator.transpose();
  const QpProblem qp =
      make_qp(detail::gram_of_views(views), view_targets(views, reference), ridge_eps);
  return ViewWeights{exact_simplex_qp(qp)};
}

SolverState solve(const MultiViewGraphSet& views, const SolverConfig& config,
                  const IterationCallback& on_iteration) {
  return detail::run_block_descent(views, nullptr, config, on_iteration);
}

namespace detail {

Matrix gram_of_views(const MultiViewGraphSet& views) {
  const Eigen::Index nv = static_cast<Eigen::Index>(views.views.size());
  Matrix gram(nv, nv);
  for (Eigen::Index u = 0; u < nv; ++u) {
    for (Eigen::Index v = u; v < nv; ++v) {
      const double dot = views.views[static_cast<std::size_t>(u)]
                             .data.cwiseProduct(views.views[static_cast<std::size_t>(v)].data)
                             .sum();
      gram(u, v) = dot;
      gram(v, u) = dot;
    }
  }
  return gram;
}

EmbeddingPair random_init(Eigen::Index n, Eigen::Index m, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto draw = [&]() {
    Matrix x(n, m);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < m; ++c) x(r, c) = gauss(engine);
    }
    return x;
  };
  EmbeddingPair e;
  e.embedding = orthonormal_columns(draw());
  e.soft_indicator = orthonormal_columns(draw()).cwiseMax(0.0);
  return e;
}

void validate_config(const MultiViewGraphSet& views, const SolverConfig& config) {
  if (views.views.empty() || views.n < 1) {
    throw Error(ErrorCode::invalid_argument, "empty graph set", "solver");
  }
  if (config.mu <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "mu must be positive", "solver");
  }
  if (config.clusters < 2) {
    throw Error(ErrorCode::invalid_argument, "clusters must be at least 2", "solver");
  }
  const Eigen::Index m = embedding_dim(config);
  if (m < 1 || m > views.n) {
    throw Error(ErrorCode::invalid_argument, "embedding dimension must lie in [1, n]",
                "solver");
  }
  if (config.tol <= 0.0 || config.max_iter < 1) {
    throw Error(ErrorCode::invalid_argument, "tol must be > 0 and max_iter >= 1", "solver");
  }
  if (config.ridge_eps < 0.0) {
    throw Error(ErrorCode::invalid_argument, "ridge_eps must be nonnegative", "solver");
  }
}

Eigen::Index embedding_dim(const SolverConfig& config) {
  return config.embedding_dim > 0 ? config.embedding_dim : config.clusters;
}

SolverState run_block_descent(const MultiViewGraphSet& views, const Matrix* offset,
                              const SolverConfig& config, const IterationCallback& cb) {
  validate_config(views, config);
  if (offset && (offset->rows() != views.n || offset->cols() != views.n)) {
    throw Error(ErrorCode::dimension_mismatch, "offset matrix size differs from graphs",
                "solver");
  }

  const Eigen::Index n = views.n;
  const Eigen::Index m = embedding_dim(config);
  const Eigen::Index nv = static_cast<Eigen::Index>(views.views.size());
  const double mu = config.mu;

  SolverState state;
  state.embedding = random_init(n, m, config.seed);
  state.weights.weights = Vector::Constant(nv, 1.0 / static_cast<double>(nv));
  state.objective_trace.reserve(static_cast<std::size_t>(config.max_iter));

  const Matrix gram = gram_of_views(views);
  const auto effective = [&](const Vector& w) -> Matrix {
    Matrix s = blended_graph(views, w);
    if (offset) s -= *offset;
    return s;
  };

  Matrix blended = effective(state.weights.weights);
  double previous = surrogate_objective(blended, state.embedding.embedding,
                                        state.embedding.soft_indicator, mu);

  for (int it = 1; it <= config.max_iter; ++it) {
    Matrix& f = state.embedding.embedding;
    Matrix& g = state.embedding.soft_indicator;
    f = stage_f(blended, g, mu);
    g = stage_g(blended, f, mu);

    Matrix reference = f * g.transpose();
    if (offset) reference += *offset;
    const Vector candidate =
        exact_simplex_qp(make_qp(gram, view_targets(views, reference), config.ridge_eps));

    // The QP is solved to a finite first-order tolerance; keep the previous
    // weights if the candidate does not improve the full objective, so the
    // trace stays non-increasing.
    const double kept = surrogate_objective(blended, f, g, mu);
    Matrix blended_candidate = effective(candidate);
    const double moved = surrogate_objective(blended_candidate, f, g, mu);
    double current;
    if (moved <= kept) {
      state.weights.weights = candidate;
      blended = std::move(blended_candidate);
      current = moved;
    } else {
      current = kept;
    }

    state.objective_trace.push_back(current);
    state.iterations = it;
    if (cb) cb(it, state.embedding, state.weights, current);

    if (current - previous > 1e-6 * std::max(previous, 1e-12)) {
      throw Error(ErrorCode::no_progress,
                  "objective increased at iteration " + std::to_string(it), "solver");
    }
    if (std::abs(current - previous) / std::max(previous, 1e-12) <= config.tol) {
      state.converged = true;
      previous = current;
      break;
    }
    previous = current;
  }
  return state;
}

}  // namespace detail

}  // namespace mvgc
