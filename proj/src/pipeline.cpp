#include "mvgc/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mvgc {

namespace {

using nlohmann::json;

void validate_options(const PipelineOptions& o) {
  const auto reject = [](const std::string& msg) {
    throw Error(ErrorCode::invalid_argument, msg, "flags");
  };
  if (o.manifest.empty()) reject("--manifest is required");
  if (o.clusters < 2) reject("--clusters must be at least 2");
  if (!(o.mu > 0.0)) reject("--mu must be positive");
  if (o.m < 0) reject("--m must be positive");
  if (o.graph != "gaussian") reject("--graph must be 'gaussian'");
  if (o.knn < 0) reject("--knn must be nonnegative");
  if (o.sigma && !(*o.sigma > 0.0)) reject("--sigma must be positive or 'auto'");
  if (o.normalize != "sym" && o.normalize != "ds") reject("--normalize must be sym or ds");
  if (!o.assign.empty() && o.assign != "argmax" && o.assign != "kmeans") {
    reject("--assign must be argmax or kmeans");
  }
  if (!(o.gamma_hat >= 0.0)) reject("--gamma-hat must be nonnegative");
  if (!(o.eta > 0.0)) reject("--eta must be positive");
  if (o.max_iter < 1) reject("--max-iter must be at least 1");
  if (!(o.tol > 0.0)) reject("--tol must be positive");
}

SimilarityMatrix normalize_graph(SimilarityMatrix a, const std::string& mode) {
  return mode == "sym" ? symmetric_normalize(a) : doubly_stochastic(a);
}

FeatureMatrix concat_features(const std::vector<FeatureMatrix>& views) {
  Eigen::Index cols = 0;
  for (const auto& v : views) cols += v.data.cols();
  Matrix x(views.front().data.rows(), cols);
  Eigen::Index at = 0;
  for (const auto& v : views) {
    x.middleCols(at, v.data.cols()) = v.data;
    at += v.data.cols();
  }
  return FeatureMatrix{std::move(x), 0};
}

json config_echo(const PipelineOptions& o, int resolved_m, const std::string& method) {
  json cfg;
  cfg["manifest"] = o.manifest;
  cfg["clusters"] = o.clusters;
  cfg["mu"] = o.mu;
  cfg["m"] = resolved_m;
  cfg["graph"] = o.graph;
  cfg["knn"] = o.knn;
  if (o.sigma) cfg["sigma"] = *o.sigma; else cfg["sigma"] = "auto";
  cfg["normalize"] = o.normalize;
  cfg["assign"] = method;
  cfg["sec"] = o.sec;
  cfg["gamma_hat"] = o.gamma_hat;
  cfg["eta"] = o.eta;
  cfg["max_iter"] = o.max_iter;
  cfg["tol"] = o.tol;
  cfg["seed"] = o.seed;
  return cfg;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

PipelineResult run_pipeline(const PipelineOptions& options) {
  validate_options(options);
  const auto started = std::chrono::steady_clock::now();

  const LoadedDataset dataset = load_views(options.manifest);

  std::vector<SimilarityMatrix> graphs;
  if (dataset.kind == DatasetKind::features) {
    for (const auto& view : dataset.features) {
      SimilarityMatrix a = gaussian_similarity(view, options.sigma);
      if (options.knn > 0) a = knn_sparsify(a, options.knn);
      graphs.push_back(normalize_graph(std::move(a), options.normalize));
    }
  } else {
    for (const auto& view : dataset.graphs) {
      graphs.push_back(normalize_graph(view, options.normalize));
    }
  }
  const MultiViewGraphSet views = make_graph_set(std::move(graphs));

  SolverConfig cfg;
  cfg.mu = options.mu;
  cfg.clusters = options.clusters;
  cfg.embedding_dim = options.m;
  cfg.max_iter = options.max_iter;
  cfg.tol = options.tol;
  cfg.seed = options.seed;
  const int resolved_m = options.m > 0 ? options.m : options.clusters;

  SolverState state;
  std::optional<SecModel> model;
  if (options.sec) {
    if (dataset.kind != DatasetKind::features) {
      throw Error(ErrorCode::invalid_argument, "--sec needs feature views", "pipeline");
    }
    SecConfig sec_cfg{cfg, options.gamma_hat, options.eta};
    auto [st, md] = solve_sec(views, concat_features(dataset.features), sec_cfg);
    state = std::move(st);
    model = std::move(md);
  } else {
    state = solve(views, cfg);
  }

  std::string method = options.assign;
  if (method.empty()) method = resolved_m == options.clusters ? "argmax" : "kmeans";
  const LabelVector labels = assign_from_embedding(
      state.embedding, options.clusters,
      method == "argmax" ? AssignMethod::argmax_g : AssignMethod::kmeans_f, options.seed);

  json report;
  report["labels"] = labels;
  report["alpha"] = std::vector<double>(
      state.weights.weights.data(),
      state.weights.weights.data() + state.weights.weights.size());
  report["objective_trace"] = state.objective_trace;
  report["iterations"] = state.iterations;
  report["converged"] = state.converged;
  if (dataset.labels) {
    report["metrics"] = {{"acc", accuracy(labels, *dataset.labels)},
                         {"f1", pairwise_f1(labels, *dataset.labels)}};
  }
  report["config"] = config_echo(options, resolved_m, method);
  report["wall_time_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  return PipelineResult{std::move(report), std::move(model)};
}

SweepResult sweep_mu(const PipelineOptions& options, double lo, double hi, double step) {
  if (!(step > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "sweep step must be positive", "flags");
  }
  if (lo > hi + 1e-12) {
    throw Error(ErrorCode::invalid_argument, "sweep lo must not exceed hi", "flags");
  }

  SweepResult result;
  result.cells = json::array();
  std::ostringstream csv;
  csv << "mu,acc,f1,iterations,converged\n";

  const int cells = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (int k = 0; k < cells; ++k) {
    const double mu = std::pow(10.0, lo + k * step);
    PipelineOptions cell_options = options;
    cell_options.mu = mu;
    json cell;
    cell["mu"] = mu;
    try {
      PipelineResult res = run_pipeline(cell_options);
      const json& report = res.report;
      double acc = std::nan("");
      double f1 = std::nan("");
      if (report.contains("metrics")) {
        acc = report["metrics"]["acc"].get<double>();
        f1 = report["metrics"]["f1"].get<double>();
      }
      csv << format_double(mu) << ',' << format_double(acc) << ',' << format_double(f1)
          << ',' << report["iterations"].get<int>() << ','
          << (report["converged"].get<bool>() ? "true" : "false") << '\n';
      cell["report"] = report;
    } catch (const Error& e) {
      cell["error"] = to_string(e.code());
      cell["detail"] = e.what();
      cell["where"] = e.where();
      csv << format_double(mu) << ",nan,nan,0,false\n";
    }
    result.cells.push_back(std::move(cell));
  }
  result.csv = csv.str();
  return result;
}

json error_json(const Error& e) {
  return json{{"error", to_string(e.code())}, {"detail", e.what()}, {"where", e.where()}};
}

json sec_model_json(const SecModel& model, double eta, double gamma_hat) {
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(model.coefficients.size()));
  for (Eigen::Index r = 0; r < model.coefficients.rows(); ++r) {
    for (Eigen::Index c = 0; c < model.coefficients.cols(); ++c) {
      w.push_back(model.coefficients(r, c));
    }
  }
  return json{{"w", w},
              {"d", model.coefficients.rows()},
              {"m", model.coefficients.cols()},
              {"b", std::vector<double>(model.intercept.data(),
                                        model.intercept.data() + model.intercept.size())},
              {"eta", eta},
              {"gamma_hat", gamma_hat}};
}

}  // namespace mvgc
