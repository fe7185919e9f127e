#include <doctest.h>

#include <random>

#include "mvgc/labels.hpp"
#include "support/synthetic.hpp"

using namespace mvgc;

namespace {

// Optimal-centroid inertia for a fixed assignment.
double assignment_inertia(const Matrix& points, const std::vector<int>& labels, int c) {
  Matrix sums = Matrix::Zero(c, points.cols());
  std::vector<int> counts(static_cast<std::size_t>(c), 0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    sums.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
    ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
  }
  for (int j = 0; j < c; ++j) {
    if (counts[static_cast<std::size_t>(j)] > 0) {
      sums.row(j) /= static_cast<double>(counts[static_cast<std::size_t>(j)]);
    }
  }
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    inertia += (points.row(i) - sums.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return inertia;
}

}  // namespace

TEST_CASE("kmeans: n = c distinct rows gives zero inertia") {
  Matrix points(3, 2);
  points << 0.0, 0.0, 5.0, 0.0, 0.0, 5.0;
  const auto [labels, model] = kmeans(points, 3, 1);
  CHECK(model.inertia == doctest::Approx(0.0).epsilon(1e-15));
  std::vector<char> seen(3, 0);
  for (int v : labels) seen[static_cast<std::size_t>(v)] = 1;
  CHECK(seen[0] + seen[1] + seen[2] == 3);
}

TEST_CASE("kmeans: separates two well-spaced 1-D groups") {
  Matrix points(4, 1);
  points << 0.0, 0.1, 10.0, 10.1;
  const auto [labels, model] = kmeans(points, 2, 3);
  CHECK(labels[0] == labels[1]);
  CHECK(labels[2] == labels[3]);
  CHECK(labels[0] != labels[2]);
  CHECK(model.inertia == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("kmeans: matches exhaustive search on a fixed 8-point instance") {
  Matrix points(8, 2);
  points << 0.1, 0.2,
            0.4, -0.1,
            -0.2, 0.3,
            0.0, -0.3,
            5.1, 4.9,
            4.8, 5.2,
            5.3, 5.1,
            4.9, 4.8;
  const auto [labels, model] = kmeans(points, 2, 5, 10, 100);

  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < 128; ++mask) {  // point 0 pinned to cluster 0
    std::vector<int> assign(8, 0);
    bool used1 = false;
    for (int i = 1; i < 8; ++i) {
      assign[static_cast<std::size_t>(i)] = (mask >> (i - 1)) & 1;
      used1 |= assign[static_cast<std::size_t>(i)] == 1;
    }
    if (!used1) continue;
    best = std::min(best, assignment_inertia(points, assign, 2));
  }
  CHECK(model.inertia == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("kmeans: inertia trace is non-increasing") {
  std::mt19937_64 engine(71);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix points = testsupport::random_gaussian(40, 3, engine);
    std::vector<double> trace;
    kmeans(points, 4, 100 + static_cast<std::uint64_t>(trial), 1, 100, &trace);
    for (std::size_t t = 1; t < trace.size(); ++t) {
      CHECK(trace[t] <= trace[t - 1] + 1e-12);
    }
  }
}

TEST_CASE("kmeans: rejects more clusters than samples") {
  try {
    kmeans(Matrix::Zero(2, 2), 3, 0);
    FAIL("expected CTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::c_too_large);
  }
}

TEST_CASE("argmax readout recovers an exact indicator") {
  const Matrix f0 = testsupport::block_indicator(9, 3);
  EmbeddingPair e{f0, f0 * 2.5};
  const LabelVector labels = assign_from_embedding(e, 3, AssignMethod::argmax_g, 0);
  CHECK(labels == testsupport::block_labels(9, 3));
}

TEST_CASE("argmax readout: zero rows take label 0 by the tie rule") {
  Matrix g = Matrix::Zero(3, 2);
  g(1, 1) = 1.0;
  EmbeddingPair e{Matrix::Zero(3, 2), g};
  const LabelVector labels = assign_from_embedding(e, 2, AssignMethod::argmax_g, 0);
  CHECK(labels[0] == 0);
  CHECK(labels[1] == 1);
  CHECK(labels[2] == 0);
}

TEST_CASE("argmax readout needs a square embedding") {
  EmbeddingPair e{Matrix::Zero(4, 3), Matrix::Zero(4, 3)};
  try {
    assign_from_embedding(e, 2, AssignMethod::argmax_g, 0);
    FAIL("expected MethodRequiresSquare");
  } catch (const Error& e2) {
    CHECK(e2.code() == ErrorCode::method_requires_square);
  }
}

TEST_CASE("kmeans readout clusters a noisy indicator embedding") {
  std::mt19937_64 engine(73);
  Matrix f = testsupport::block_indicator(30, 3);
  f += 0.01 * testsupport::random_gaussian(30, 3, engine);
  EmbeddingPair e{f, f};
  const LabelVector km = assign_from_embedding(e, 3, AssignMethod::kmeans_f, 7);
  const LabelVector am = assign_from_embedding(e, 3, AssignMethod::argmax_g, 7);
  CHECK(accuracy(km, am) == 1.0);
}

TEST_CASE("centroid assigner reproduces training labels on separated data") {
  const Matrix f0 = testsupport::block_indicator(12, 3);
  const LabelVector labels = testsupport::block_labels(12, 3);
  const CentroidAssigner assigner = fit_centroid_assigner(f0, labels, 3);
  CHECK(assigner.assign(f0) == labels);

  // Constant rows map to a single cluster.
  Matrix constant = Matrix::Zero(4, 3);
  const LabelVector pred = assigner.assign(constant);
  for (std::size_t i = 1; i < pred.size(); ++i) CHECK(pred[i] == pred[0]);
}
