#include <doctest.h>

#include <random>

#include "mvgc/labels.hpp"
#include "mvgc/solver.hpp"
#include "support/synthetic.hpp"

using namespace mvgc;

namespace {

MultiViewGraphSet single_view(Matrix a) {
  return make_graph_set({SimilarityMatrix{std::move(a), Normalization::raw, 0.0}});
}

// Scalar-loop re-evaluation of both Frobenius terms.
double objective_oracle(const MultiViewGraphSet& views, const EmbeddingPair& e,
                        const Vector& w, double mu) {
  const Eigen::Index n = views.n;
  const Eigen::Index m = e.embedding.cols();
  double fit = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double blended = 0.0;
      for (std::size_t v = 0; v < views.views.size(); ++v) {
        blended += w[static_cast<Eigen::Index>(v)] * views.views[v].data(i, j);
      }
      double recon = 0.0;
      for (Eigen::Index k = 0; k < m; ++k) recon += e.embedding(i, k) * e.soft_indicator(j, k);
      fit += (blended - recon) * (blended - recon);
    }
  }
  double tie = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < m; ++k) {
      const double d = e.embedding(i, k) - e.soft_indicator(i, k);
      tie += d * d;
    }
  }
  return fit + mu * tie;
}

ViewWeights uniform_weights(std::size_t nv) {
  return ViewWeights{Vector::Constant(static_cast<Eigen::Index>(nv), 1.0 / static_cast<double>(nv))};
}

}  // namespace

TEST_CASE("objective: exact factorization hits zero") {
  const Matrix f0 = testsupport::block_indicator(8, 2);
  const MultiViewGraphSet views = single_view(f0 * f0.transpose());
  const EmbeddingPair e{f0, f0};
  CHECK(objective(views, e, uniform_weights(1), 3.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("objective: projector norm of an orthonormal factor") {
  std::mt19937_64 engine(79);
  const Matrix f = testsupport::random_orthonormal(7, 3, engine);
  const MultiViewGraphSet views = single_view(Matrix::Zero(7, 7));
  const EmbeddingPair e{f, f};
  CHECK(objective(views, e, uniform_weights(1), 5.0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("objective: matches the scalar brute-force oracle") {
  std::mt19937_64 engine(83);
  const MultiViewGraphSet views = single_view(testsupport::random_similarity(4, engine).data);
  const EmbeddingPair e{testsupport::random_gaussian(4, 2, engine),
                        testsupport::random_gaussian(4, 2, engine)};
  const ViewWeights w = uniform_weights(1);
  const double value = objective(views, e, w, 0.7);
  CHECK(value == doctest::Approx(objective_oracle(views, e, w.weights, 0.7)).epsilon(1e-12));
}

TEST_CASE("objective: dimension mismatch") {
  std::mt19937_64 engine(89);
  const MultiViewGraphSet views = single_view(testsupport::random_similarity(4, engine).data);
  const EmbeddingPair e{Matrix::Zero(5, 2), Matrix::Zero(5, 2)};
  CHECK_THROWS_AS(objective(views, e, uniform_weights(1), 1.0), Error);
}

TEST_CASE("procrustes: identity and orthonormal fixed points") {
  CHECK(orthogonal_procrustes(Matrix::Identity(4, 4)).isApprox(Matrix::Identity(4, 4), 1e-12));

  std::mt19937_64 engine(97);
  const Matrix q = testsupport::random_orthonormal(6, 3, engine);
  CHECK(orthogonal_procrustes(q).isApprox(q, 1e-10));
}

TEST_CASE("procrustes: orthonormality, nuclear norm, and sampled dominance") {
  std::mt19937_64 engine(101);
  const Matrix m = testsupport::random_gaussian(5, 3, engine);
  const Matrix f = orthogonal_procrustes(m);

  CHECK((f.transpose() * f - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);

  Eigen::JacobiSVD<Matrix> svd(m);
  const double nuclear = svd.singularValues().sum();
  const double attained = (f.transpose() * m).trace();
  CHECK(std::abs(attained - nuclear) <= 1e-8 * (1.0 + nuclear));

  for (int s = 0; s < 1000; ++s) {
    const Matrix q = testsupport::random_orthonormal(5, 3, engine);
    CHECK((q.transpose() * m).trace() <= attained + 1e-9);
  }
}

TEST_CASE("procrustes: input checks") {
  Matrix bad = Matrix::Ones(3, 2);
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(orthogonal_procrustes(bad), Error);
  CHECK_THROWS_AS(orthogonal_procrustes(Matrix::Ones(2, 3)), Error);
}

TEST_CASE("update_f: fixed points from the trivial instances") {
  std::mt19937_64 engine(103);
  const Matrix g = testsupport::random_orthonormal(6, 2, engine);

  const MultiViewGraphSet zero = single_view(Matrix::Zero(6, 6));
  CHECK(update_f(zero, g, uniform_weights(1), 1.0).isApprox(g, 1e-10));

  const MultiViewGraphSet eye = single_view(Matrix::Identity(6, 6));
  CHECK(update_f(eye, g, uniform_weights(1), 0.0).isApprox(g, 1e-10));
}

TEST_CASE("update_f and update_g both descend the objective") {
  std::mt19937_64 engine(107);
  for (int trial = 0; trial < 5; ++trial) {
    const MultiViewGraphSet views =
        single_view(testsupport::random_similarity(6, engine).data);
    const ViewWeights w = uniform_weights(1);
    EmbeddingPair e{testsupport::random_orthonormal(6, 3, engine),
                    testsupport::random_orthonormal(6, 3, engine).cwiseMax(0.0)};
    const double mu = 0.8;

    const double before_f = objective(views, e, w, mu);
    e.embedding = update_f(views, e.soft_indicator, w, mu);
    const double after_f = objective(views, e, w, mu);
    CHECK(after_f <= before_f + 1e-9);

    e.soft_indicator = update_g(views, e.embedding, w, mu);
    const double after_g = objective(views, e, w, mu);
    CHECK(after_g <= after_f + 1e-9);
    CHECK(e.soft_indicator.minCoeff() >= 0.0);
  }
}

TEST_CASE("update_g equals the clamped closed form and a coordinate grid search") {
  std::mt19937_64 engine(109);
  const MultiViewGraphSet views = single_view(testsupport::random_similarity(5, engine).data);
  const ViewWeights w = uniform_weights(1);
  const Matrix f = testsupport::random_orthonormal(5, 2, engine);
  const double mu = 1.3;

  const Matrix p =
      ((views.views[0].data * f + mu * f) / (1.0 + mu));
  const Matrix g = update_g(views, f, w, mu);
  CHECK(g.isApprox(p.cwiseMax(0.0), 1e-14));

  // Any single-coordinate deviation on a fine grid cannot do better.
  EmbeddingPair best{f, g};
  const double optimal = objective(views, best, w, mu);
  for (double value = -1.0; value <= 1.0; value += 0.01) {
    EmbeddingPair probe{f, g};
    probe.soft_indicator(2, 1) = value < 0.0 ? 0.0 : value;
    CHECK(optimal <= objective(views, probe, w, mu) + 1e-12);
  }
}

TEST_CASE("update_g clamps negative entries exactly") {
  Matrix p(2, 2);
  p << 1.0, -2.0, 0.5, 0.0;
  const Matrix clamped = p.cwiseMax(0.0);
  CHECK(clamped(0, 0) == 1.0);
  CHECK(clamped(0, 1) == 0.0);
  CHECK(clamped(1, 0) == 0.5);
  CHECK(clamped(1, 1) == 0.0);
}

TEST_CASE("update_alpha: single view and duplicated views") {
  std::mt19937_64 engine(113);
  const Matrix a = testsupport::random_similarity(5, engine).data;
  const Matrix f0 = testsupport::block_indicator(5, 2);
  const EmbeddingPair e{f0, f0};

  const ViewWeights single = update_alpha(single_view(a), e, 1e-10);
  CHECK(single.weights(0) == 1.0);

  const MultiViewGraphSet twice = make_graph_set(
      {SimilarityMatrix{a, Normalization::raw, 0.0}, SimilarityMatrix{a, Normalization::raw, 0.0}});
  const ViewWeights dup = update_alpha(twice, e, 1e-10);
  CHECK(dup.weights(0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(dup.weights(1) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(dup.weights.minCoeff() >= 0.0);
  CHECK(std::abs(dup.weights.sum() - 1.0) <= 1e-10);
}

TEST_CASE("update_alpha: concentrates on the exactly matching view") {
  const Matrix f0 = testsupport::block_indicator(6, 2);
  const Matrix exact = f0 * f0.transpose();
  std::mt19937_64 engine(127);
  Matrix noise = testsupport::random_similarity(6, engine).data * 3.0;
  const MultiViewGraphSet views =
      make_graph_set({SimilarityMatrix{exact, Normalization::raw, 0.0},
                      SimilarityMatrix{exact + noise, Normalization::raw, 0.0}});
  const EmbeddingPair e{f0, f0};
  const ViewWeights w = update_alpha(views, e, 1e-10);

  // Grid-search oracle at resolution 1e-3 on the same Gram system.
  Matrix gram(2, 2);
  Vector target(2);
  for (int u = 0; u < 2; ++u) {
    target(u) = views.views[static_cast<std::size_t>(u)].data.cwiseProduct(exact).sum();
    for (int v = 0; v < 2; ++v) {
      gram(u, v) = views.views[static_cast<std::size_t>(u)]
                       .data.cwiseProduct(views.views[static_cast<std::size_t>(v)].data)
                       .sum();
    }
  }
  double best_t = 0.0;
  double best_f = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 1000; ++i) {
    const double t = i * 1e-3;
    Vector a(2);
    a << t, 1.0 - t;
    const double f = a.dot(gram * a) - 2.0 * target.dot(a);
    if (f < best_f) {
      best_f = f;
      best_t = t;
    }
  }
  CHECK(best_t >= 0.9);  // oracle concentrates on the exact view
  CHECK(std::abs(w.weights(0) - best_t) <= 1e-3);
}

TEST_CASE("solve: exact factorization reaches a near-zero objective") {
  const Matrix f0 = testsupport::block_indicator(12, 3);
  const MultiViewGraphSet views = single_view(f0 * f0.transpose());
  SolverConfig config;
  config.mu = 1.0;
  config.clusters = 3;
  config.max_iter = 500;
  config.tol = 1e-14;
  config.seed = 2;
  const SolverState state = solve(views, config);
  CHECK(state.objective_trace.back() <= 1e-8);

  const LabelVector labels =
      assign_from_embedding(state.embedding, 3, AssignMethod::argmax_g, config.seed);
  CHECK(accuracy(labels, testsupport::block_labels(12, 3)) == 1.0);
}

TEST_CASE("solve: trace is non-increasing and constraints hold") {
  std::mt19937_64 engine(131);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<SimilarityMatrix> graphs;
    for (int v = 0; v < 2 + trial; ++v) {
      graphs.push_back(testsupport::random_similarity(10, engine));
    }
    const MultiViewGraphSet views = make_graph_set(std::move(graphs));
    SolverConfig config;
    config.clusters = 3;
    config.seed = 1000 + static_cast<std::uint64_t>(trial);
    config.max_iter = 60;
    const SolverState state = solve(views, config);

    for (std::size_t t = 1; t < state.objective_trace.size(); ++t) {
      CHECK(state.objective_trace[t] <= state.objective_trace[t - 1] + 1e-9);
    }
    const Matrix& f = state.embedding.embedding;
    CHECK((f.transpose() * f - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(state.embedding.soft_indicator.minCoeff() >= 0.0);
    CHECK(state.weights.weights.minCoeff() >= 0.0);
    CHECK(std::abs(state.weights.weights.sum() - 1.0) <= 1e-10);
    CHECK(state.iterations == static_cast<int>(state.objective_trace.size()));
  }
}

TEST_CASE("solve: deterministic for a fixed seed") {
  std::mt19937_64 engine(137);
  const MultiViewGraphSet views = make_graph_set(
      {testsupport::random_similarity(9, engine), testsupport::random_similarity(9, engine)});
  SolverConfig config;
  config.clusters = 2;
  config.seed = 42;
  const SolverState a = solve(views, config);
  const SolverState b = solve(views, config);
  REQUIRE(a.objective_trace.size() == b.objective_trace.size());
  for (std::size_t t = 0; t < a.objective_trace.size(); ++t) {
    CHECK(a.objective_trace[t] == b.objective_trace[t]);
  }
  CHECK((a.embedding.soft_indicator - b.embedding.soft_indicator).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK((a.weights.weights - b.weights.weights).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("solve: labels invariant to a common graph scale with rescaled mu") {
  const Matrix f0 = testsupport::block_indicator(12, 3);
  const Matrix base = f0 * f0.transpose();
  const double scale = 2.0;

  SolverConfig config;
  config.clusters = 3;
  config.seed = 9;
  config.max_iter = 300;
  config.tol = 1e-12;

  const SolverState plain = solve(single_view(base), config);
  SolverConfig scaled_config = config;
  scaled_config.mu = config.mu * scale * scale;
  const SolverState scaled = solve(single_view(scale * base), scaled_config);

  const LabelVector la =
      assign_from_embedding(plain.embedding, 3, AssignMethod::argmax_g, config.seed);
  const LabelVector lb =
      assign_from_embedding(scaled.embedding, 3, AssignMethod::argmax_g, config.seed);
  CHECK(accuracy(la, lb) == 1.0);
}

TEST_CASE("solve: config validation") {
  std::mt19937_64 engine(139);
  const MultiViewGraphSet views = single_view(testsupport::random_similarity(5, engine).data);
  SolverConfig config;
  config.clusters = 3;

  SolverConfig bad = config;
  bad.mu = 0.0;
  CHECK_THROWS_AS(solve(views, bad), Error);
  bad = config;
  bad.clusters = 1;
  CHECK_THROWS_AS(solve(views, bad), Error);
  bad = config;
  bad.embedding_dim = 6;
  CHECK_THROWS_AS(solve(views, bad), Error);
  bad = config;
  bad.tol = 0.0;
  CHECK_THROWS_AS(solve(views, bad), Error);
}
