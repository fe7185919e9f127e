#pragma once

#include "mvgc/types.hpp"

namespace mvgc {

/// Least-squares view-weight problem in Gram form:
///   minimize  a' (gram + ridge_eps I) a - 2 target' a
///   over      a >= 0, sum(a) = 1.
/// gram = B'B and target = B'c for the stacked vectorized-residual system, so
/// the n^2-row design matrix never has to be materialized.
struct QpProblem {
  Matrix gram;
  Vector target;
  double ridge_eps = 1e-10;
};

/// Validates symmetry of gram and positive definiteness of gram + ridge_eps I.
QpProblem make_qp(Matrix gram, Vector target, double ridge_eps = 1e-10);

double qp_objective(const QpProblem& p, const Vector& alpha);

/// Euclidean projection onto the probability simplex (sort-and-threshold).
Vector project_simplex(const Vector& y);

/// The affine-constrained stationary point J = QV + Q1/N - Q11'QV/N with
/// Q = (gram + ridge I)^{-1} and N = 1'Q1. Sums to 1 by construction but may
/// have negative entries.
Vector kkt_affine_solution(const QpProblem& p);

/// Clamp-based closed form: (J)_+, renormalized to sum 1 when the clamp was
/// active. Kept for fidelity and ablation; not exact once the clamp engages.
Vector closed_form_kkt(const QpProblem& p);

/// Accelerated projected gradient run to first-order optimality <= 1e-10.
/// This is the authoritative solver for view weights.
Vector exact_simplex_qp(const QpProblem& p);

}  // namespace mvgc
