#include "mvgc/sec.hpp"

#include "solver_core.hpp"

namespace mvgc {

namespace {

Eigen::LDLT<Matrix> ridged_feature_gram(const Matrix& samples, double eta) {
  // samples is n x d; in the feature-major orientation X X' + eta I_d is
  // samples' samples.
  Matrix gram = samples.transpose() * samples;
  gram.diagonal().array() += eta;
  Eigen::LDLT<Matrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success) {
    throw Error(ErrorCode::singular_system, "feature gram factorization failed", "sec");
  }
  return ldlt;
}

void check_features(const FeatureMatrix& x, double eta) {
  if (x.data.rows() < 2) {
    throw Error(ErrorCode::invalid_argument, "need at least two samples", "sec");
  }
  if (!x.data.allFinite()) {
    throw Error(ErrorCode::non_finite, "feature matrix has non-finite entries", "sec");
  }
  if (eta <= 0.0) {
    throw Error(ErrorCode::invalid_argument, "eta must be positive", "sec");
  }
}

}  // namespace

std::pair<Matrix, Vector> regression_params(const FeatureMatrix& x, const Matrix& f,
                                            double eta) {
  check_features(x, eta);
  if (x.data.rows() != f.rows()) {
    throw Error(ErrorCode::dimension_mismatch, "feature rows differ from embedding rows",
                "sec");
  }
  const Vector intercept = f.colwise().mean();
  const Matrix coefficients = ridged_feature_gram(x.data, eta).solve(x.data.transpose() * f);
  return {coefficients, intercept};
}

Matrix sec_graph_term(const FeatureMatrix& x, double eta) {
  check_features(x, eta);
  const Eigen::Index n = x.data.rows();
  const Matrix projector = x.data * ridged_feature_gram(x.data, eta).solve(x.data.transpose());
  Matrix l = Matrix::Constant(n, n, -1.0 / static_cast<double>(n)) - projector;
  l.diagonal().array() += 1.0;
  return 0.5 * (l + l.transpose());
}

std::pair<SolverState, SecModel> solve_sec(const MultiViewGraphSet& views,
                                           const FeatureMatrix& x, const SecConfig& config,
                                           const IterationCallback& on_iteration) {
  check_features(x, config.eta);
  if (x.data.rows() != views.n) {
    throw Error(ErrorCode::dimension_mismatch, "feature rows differ from graph size", "sec");
  }
  if (config.gamma_hat < 0.0) {
    throw Error(ErrorCode::invalid_argument, "gamma_hat must be nonnegative", "sec");
  }

  // L_g depends only on X and eta, so it is computed once; the per-iteration
  // regression refit the outer algorithm describes never feeds back into the
  // loop, so a single fit on the final embedding is equivalent.
  const Matrix graph_term = sec_graph_term(x, config.eta);
  SolverState state;
  if (config.gamma_hat == 0.0) {
    state = detail::run_block_descent(views, nullptr, config.base, on_iteration);
  } else {
    const Matrix offset = config.gamma_hat * graph_term;
    state = detail::run_block_descent(views, &offset, config.base, on_iteration);
  }

  auto [coefficients, intercept] =
      regression_params(x, state.embedding.embedding, config.eta);
  SecModel model{std::move(coefficients), std::move(intercept), graph_term};
  return {std::move(state), std::move(model)};
}

Matrix sec_embed(const FeatureMatrix& x_new, const SecModel& model) {
  if (x_new.data.cols() != model.coefficients.rows()) {
    throw Error(ErrorCode::dimension_mismatch,
                "feature width differs from fitted coefficients", "sec");
  }
  if (!x_new.data.allFinite()) {
    throw Error(ErrorCode::non_finite, "feature matrix has non-finite entries", "sec");
  }
  return (x_new.data * model.coefficients).rowwise() + model.intercept.transpose();
}

LabelVector predict_out_of_sample(const FeatureMatrix& x_new, const SecModel& model,
                                  const CentroidAssigner& assign) {
  return assign.assign(sec_embed(x_new, model));
}

}  // namespace mvgc
