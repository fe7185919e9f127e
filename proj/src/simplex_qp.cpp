#include "mvgc/simplex_qp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace mvgc {

namespace {

constexpr double kOptimalityTol = 1e-10;
constexpr int kMaxIterations = 100000;

Vector apply_ridged(const QpProblem& p, const Vector& a) {
  return p.gram * a + p.ridge_eps * a;
}

Vector gradient(const QpProblem& p, const Vector& a) {
  return 2.0 * (apply_ridged(p, a) - p.target);
}

}  // namespace

QpProblem make_qp(Matrix gram, Vector target, double ridge_eps) {
  if (gram.rows() != gram.cols() || gram.rows() != target.size() || gram.rows() < 1) {
    throw Error(ErrorCode::dimension_mismatch, "gram/target sizes disagree", "simplex-qp");
  }
  if (!gram.allFinite() || !target.allFinite()) {
    throw Error(ErrorCode::non_finite, "QP problem has non-finite entries", "simplex-qp");
  }
  if (ridge_eps < 0.0) {
    throw Error(ErrorCode::invalid_argument, "ridge_eps must be nonnegative", "simplex-qp");
  }
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorCode::invalid_argument, "gram matrix is not symmetric", "simplex-qp");
  }
  Matrix ridged = gram;
  ridged.diagonal().array() += ridge_eps;
  Eigen::LDLT<Matrix> ldlt(ridged);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 0.0) {
    throw Error(ErrorCode::singular_system,
                "gram + ridge_eps I is not positive definite", "simplex-qp");
  }
  return QpProblem{std::move(gram), std::move(target), ridge_eps};
}

double qp_objective(const QpProblem& p, const Vector& alpha) {
  return alpha.dot(apply_ridged(p, alpha)) - 2.0 * p.target.dot(alpha);
}

Vector project_simplex(const Vector& y) {
  const Eigen::Index n = y.size();
  if (n < 1) {
    throw Error(ErrorCode::invalid_argument, "cannot project an empty vector", "simplex-qp");
  }
  if (!y.allFinite()) {
    throw Error(ErrorCode::non_finite, "projection input has non-finite entries",
                "simplex-qp");
  }
  std::vector<double> u(y.data(), y.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = u[0] - 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumulative += u[static_cast<std::size_t>(j)];
    const double t = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - t > 0.0) tau = t;
  }
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = std::max(y[i] - tau, 0.0);
  return out;
}

Vector kkt_affine_solution(const QpProblem& p) {
  Matrix ridged = p.gram;
  ridged.diagonal().array() += p.ridge_eps;
  Eigen::LDLT<Matrix> ldlt(ridged);
  if (ldlt.info() != Eigen::Success) {
    throw Error(ErrorCode::singular_system, "factorization of gram system failed",
                "simplex-qp");
  }
  const Vector ones = Vector::Ones(p.gram.rows());
  const Vector qv = ldlt.solve(p.target);
  const Vector q1 = ldlt.solve(ones);
  const double n1q1 = ones.dot(q1);
  if (!(n1q1 > 0.0) || !std::isfinite(n1q1)) {
    throw Error(ErrorCode::singular_system, "degenerate 1'Q1 in KKT closed form",
                "simplex-qp");
  }
  return qv + q1 / n1q1 - q1 * (ones.dot(qv) / n1q1);
}

Vector closed_form_kkt(const QpProblem& p) {
  if (p.gram.rows() == 1) return Vector::Ones(1);
  const Vector j = kkt_affine_solution(p);
  if ((j.array() >= 0.0).all()) return j;
  Vector clamped = j.cwiseMax(0.0);
  return clamped / clamped.sum();
}

Vector exact_simplex_qp(const QpProblem& p) {
  const Eigen::Index n = p.gram.rows();
  if (n == 1) return Vector::Ones(1);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(p.gram, Eigen::EigenvaluesOnly);
  const double lipschitz =
      std::max(2.0 * (std::max(eig.eigenvalues().maxCoeff(), 0.0) + p.ridge_eps), 1e-12);

  const auto residual = [&](const Vector& a) {
    return (a - project_simplex(a - gradient(p, a) / lipschitz))
        .cwiseAbs()
        .maxCoeff();
  };

  Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
  if (residual(x) <= kOptimalityTol) return x;

  // Monotone FISTA: the accelerated candidate is only accepted when it does
  // not increase the objective.
  Vector x_prev = x;
  Vector y = x;
  double fx = qp_objective(p, x);
  double t = 1.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    const Vector z = project_simplex(y - gradient(p, y) / lipschitz);
    const double fz = qp_objective(p, z);
    Vector x_next = (fz <= fx) ? z : x;
    const double fx_next = std::min(fz, fx);

    if (residual(x_next) <= kOptimalityTol) return x_next;

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x_next + (t / t_next) * (z - x_next) + ((t - 1.0) / t_next) * (x_next - x_prev);
    x_prev = std::move(x);
    x = std::move(x_next);
    fx = fx_next;
    t = t_next;
  }
  throw Error(ErrorCode::no_convergence,
              "projected gradient failed to reach first-order optimality", "simplex-qp");
}

}  // namespace mvgc
