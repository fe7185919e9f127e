#pragma once

#include <utility>

#include "mvgc/labels.hpp"
#include "mvgc/solver.hpp"

namespace mvgc {

/// Configuration for the regression-coupled solver: gamma_hat weights the
/// feature-induced graph term, eta is the ridge on the regression weights.
/// gamma_hat = 0 reduces the model to the plain solver exactly.
struct SecConfig {
  SolverConfig base;
  double gamma_hat = 1.0;
  double eta = 1.0;
};

/// Fitted linear map from features to the embedding plus the cached graph
/// term. Centering inside graph_term uses H = I - (1/n) 1 1'.
struct SecModel {
  Matrix coefficients;  // d x m
  Vector intercept;     // m
  Matrix graph_term;    // n x n
};

/// Ridge regression of the embedding on the features:
/// intercept = column means of F, coefficients = (X X' + eta I_d)^{-1} X F
/// with X in feature-major (d x n) orientation.
std::pair<Matrix, Vector> regression_params(const FeatureMatrix& x, const Matrix& f,
                                            double eta);

/// L_g = H - X'(X X' + eta I_d)^{-1} X, symmetric, PSD on the centered
/// subspace for eta > 0.
Matrix sec_graph_term(const FeatureMatrix& x, double eta);

/// Block descent on the graph-regularized objective
/// |(sum_v a_v A_v - gamma_hat L_g) - F G'|_F^2 + mu |F - G|_F^2, followed by
/// a single regression fit on the final embedding.
std::pair<SolverState, SecModel> solve_sec(const MultiViewGraphSet& views,
                                           const FeatureMatrix& x, const SecConfig& config,
                                           const IterationCallback& on_iteration = {});

/// Row i of the result is x_i' W + b'.
Matrix sec_embed(const FeatureMatrix& x_new, const SecModel& model);

/// Embeds unseen samples through the fitted regression and labels them with
/// the frozen train-time assigner.
LabelVector predict_out_of_sample(const FeatureMatrix& x_new, const SecModel& model,
                                  const CentroidAssigner& assign);

}  // namespace mvgc
