#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "mvgc/dataset.hpp"
#include "mvgc/sec.hpp"

namespace mvgc {

/// One field per CLI flag; see the README for semantics and defaults.
struct PipelineOptions {
  std::string manifest;
  int clusters = 0;
  double mu = 1.0;
  int m = 0;  // 0 -> clusters
  std::string graph = "gaussian";
  int knn = 0;                  // 0 = dense
  std::optional<double> sigma;  // nullopt = auto
  std::string normalize = "ds";
  std::string assign;  // "argmax" | "kmeans" | empty = auto by m
  bool sec = false;
  double gamma_hat = 1.0;
  double eta = 1.0;
  int max_iter = 100;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

struct PipelineResult {
  nlohmann::json report;
  std::optional<SecModel> sec_model;
};

/// Full batch run: load, build and normalize graphs, solve, read labels,
/// score against ground truth when present, and assemble the run report.
PipelineResult run_pipeline(const PipelineOptions& options);

struct SweepResult {
  nlohmann::json cells;  // JSON array ordered by mu
  std::string csv;       // "mu,acc,f1,iterations,converged" summary
};

/// Runs the pipeline at mu = 10^p for p = lo, lo+step, ..., hi with a shared
/// seed. A failing cell is recorded with its error and the sweep continues.
SweepResult sweep_mu(const PipelineOptions& options, double lo, double hi, double step);

nlohmann::json error_json(const Error& e);
nlohmann::json sec_model_json(const SecModel& model, double eta, double gamma_hat);

}  // namespace mvgc
