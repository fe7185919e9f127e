#include "mvgc/labels.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace mvgc {

namespace {

int nearest_row(const Matrix& centroids, const Eigen::RowVectorXd& point) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < centroids.rows(); ++j) {
    const double d = (point - centroids.row(j)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(j);
    }
  }
  return best;
}

struct LloydRun {
  LabelVector labels;
  Matrix centroids;
  double inertia = 0.0;
  std::vector<double> trace;
};

Matrix seed_plus_plus(const Matrix& points, int c, std::mt19937_64& engine) {
  const Eigen::Index n = points.rows();
  Matrix centroids(c, points.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  centroids.row(0) = points.row(pick(engine));

  Vector d2 = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int j = 1; j < c; ++j) {
    const double total = d2.sum();
    Eigen::Index chosen;
    if (total > 0.0) {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const double r = unit(engine) * total;
      double cumulative = 0.0;
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        cumulative += d2[i];
        if (cumulative > r) {
          chosen = i;
          break;
        }
      }
    } else {
      // All remaining mass is on already-chosen points.
      chosen = pick(engine);
    }
    centroids.row(j) = points.row(chosen);
    d2 = d2.cwiseMin((points.rowwise() - centroids.row(j)).rowwise().squaredNorm());
  }
  return centroids;
}

LloydRun lloyd(const Matrix& points, int c, std::uint64_t engine_seed, int max_iter) {
  const Eigen::Index n = points.rows();
  std::mt19937_64 engine(engine_seed);

  LloydRun run;
  run.centroids = seed_plus_plus(points, c, engine);
  run.labels.assign(static_cast<std::size_t>(n), 0);

  LabelVector previous;
  for (int it = 0; it < max_iter; ++it) {
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int j = nearest_row(run.centroids, points.row(i));
      run.labels[static_cast<std::size_t>(i)] = j;
      inertia += (points.row(i) - run.centroids.row(j)).squaredNorm();
    }
    run.inertia = inertia;
    run.trace.push_back(inertia);
    if (run.labels == previous) break;
    previous = run.labels;

    Matrix sums = Matrix::Zero(c, points.cols());
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(c), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(run.labels[static_cast<std::size_t>(i)]) += points.row(i);
      ++counts[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(i)])];
    }
    for (int j = 0; j < c; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) {
        run.centroids.row(j) = sums.row(j) / static_cast<double>(counts[static_cast<std::size_t>(j)]);
      }
    }
    // Repair empty clusters with the point farthest from its own centroid.
    for (int j = 0; j < c; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) continue;
      Eigen::Index donor = 0;
      double worst = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int owner = run.labels[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(owner)] <= 1) continue;
        const double d = (points.row(i) - run.centroids.row(owner)).squaredNorm();
        if (d > worst) {
          worst = d;
          donor = i;
        }
      }
      const int old = run.labels[static_cast<std::size_t>(donor)];
      run.centroids.row(j) = points.row(donor);
      run.labels[static_cast<std::size_t>(donor)] = j;
      --counts[static_cast<std::size_t>(old)];
      ++counts[static_cast<std::size_t>(j)];
    }
  }

  // Final assignment-consistent inertia.
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int j = nearest_row(run.centroids, points.row(i));
    run.labels[static_cast<std::size_t>(i)] = j;
    inertia += (points.row(i) - run.centroids.row(j)).squaredNorm();
  }
  run.inertia = inertia;
  return run;
}

}  // namespace

std::pair<LabelVector, KMeansModel> kmeans(const Matrix& points, int c, std::uint64_t seed,
                                           int restarts, int max_iter,
                                           std::vector<double>* inertia_trace) {
  const Eigen::Index n = points.rows();
  if (c < 1) {
    throw Error(ErrorCode::invalid_argument, "cluster count must be positive", "labels");
  }
  if (n < c) {
    throw Error(ErrorCode::c_too_large, "more clusters than samples", "labels");
  }
  if (!points.allFinite()) {
    throw Error(ErrorCode::non_finite, "points contain non-finite entries", "labels");
  }
  if (restarts < 1 || max_iter < 1) {
    throw Error(ErrorCode::invalid_argument, "restarts and max_iter must be >= 1", "labels");
  }

  LloydRun best;
  bool have_best = false;
  for (int r = 0; r < restarts; ++r) {
    LloydRun run = lloyd(points, c, seed + static_cast<std::uint64_t>(r), max_iter);
    if (!have_best || run.inertia < best.inertia) {
      best = std::move(run);
      have_best = true;
    }
  }
  if (inertia_trace) *inertia_trace = best.trace;

  KMeansModel model;
  model.centroids = std::move(best.centroids);
  model.inertia = best.inertia;
  model.seed = seed;
  return {std::move(best.labels), std::move(model)};
}

LabelVector assign_from_embedding(const EmbeddingPair& e, int c, AssignMethod method,
                                  std::uint64_t seed) {
  if (method == AssignMethod::argmax_g) {
    const Matrix& g = e.soft_indicator;
    if (g.cols() != c) {
      throw Error(ErrorCode::method_requires_square,
                  "argmax readout needs embedding dimension equal to cluster count",
                  "labels");
    }
    LabelVector labels(static_cast<std::size_t>(g.rows()), 0);
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      int arg = 0;
      for (Eigen::Index j = 1; j < g.cols(); ++j) {
        if (g(i, j) > g(i, arg)) arg = static_cast<int>(j);
      }
      labels[static_cast<std::size_t>(i)] = arg;
    }
    return labels;
  }

  Matrix rows = e.embedding;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double norm = rows.row(i).norm();
    if (norm > 0.0) rows.row(i) /= norm;
  }
  return kmeans(rows, c, seed, 10, 100).first;
}

LabelVector CentroidAssigner::assign(const Matrix& rows) const {
  if (rows.cols() != centroids.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "row width differs from centroid width",
                "labels");
  }
  LabelVector labels(static_cast<std::size_t>(rows.rows()), 0);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    labels[static_cast<std::size_t>(i)] = nearest_row(centroids, rows.row(i));
  }
  return labels;
}

CentroidAssigner fit_centroid_assigner(const Matrix& embedding, const LabelVector& labels,
                                       int c) {
  if (static_cast<Eigen::Index>(labels.size()) != embedding.rows()) {
    throw Error(ErrorCode::length_mismatch, "label count differs from embedding rows",
                "labels");
  }
  if (c < 1) {
    throw Error(ErrorCode::invalid_argument, "cluster count must be positive", "labels");
  }
  Matrix sums = Matrix::Zero(c, embedding.cols());
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(c), 0);
  for (Eigen::Index i = 0; i < embedding.rows(); ++i) {
    const int j = labels[static_cast<std::size_t>(i)];
    if (j < 0 || j >= c) {
      throw Error(ErrorCode::invalid_argument, "label out of range", "labels");
    }
    sums.row(j) += embedding.row(i);
    ++counts[static_cast<std::size_t>(j)];
  }
  for (int j = 0; j < c; ++j) {
    if (counts[static_cast<std::size_t>(j)] > 0) {
      sums.row(j) /= static_cast<double>(counts[static_cast<std::size_t>(j)]);
    }
  }
  return CentroidAssigner{std::move(sums)};
}

}  // namespace mvgc
