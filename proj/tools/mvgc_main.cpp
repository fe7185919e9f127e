#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mvgc/pipeline.hpp"

namespace {

int fail(const nlohmann::json& err) {
  std::cout << err.dump(2) << std::endl;
  return 1;
}

int fail(const mvgc::Error& e) { return fail(mvgc::error_json(e)); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw mvgc::Error(mvgc::ErrorCode::parse_error, "cannot open output file", path);
  }
  out << text;
}

std::optional<double> parse_sigma(const std::string& text) {
  if (text == "auto") return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw mvgc::Error(mvgc::ErrorCode::invalid_argument,
                      "--sigma must be a number or 'auto'", "flags");
  }
  return value;
}

std::string sibling_csv_path(const std::string& out_path) {
  std::filesystem::path p(out_path);
  p.replace_extension(".csv");
  if (p.string() == out_path) p += ".csv";
  return p.string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-view graph clustering via orthonormal nonnegative factorization"};

  mvgc::PipelineOptions options;
  std::string sigma_text = "auto";
  std::vector<double> sweep;
  std::string out_path;
  std::string model_out;

  app.add_option("--manifest", options.manifest, "Dataset manifest JSON")->required();
  app.add_option("--clusters", options.clusters, "Number of clusters")->required();
  app.add_option("--mu", options.mu, "Mixing parameter (default 1.0)");
  app.add_option("--m", options.m, "Embedding dimension (default = clusters)");
  app.add_option("--graph", options.graph, "Graph construction: gaussian");
  app.add_option("--knn", options.knn, "Keep k nearest neighbors per row (0 = dense)");
  app.add_option("--sigma", sigma_text, "Gaussian kernel width, or 'auto'");
  app.add_option("--normalize", options.normalize, "Graph normalization: sym | ds");
  app.add_option("--assign", options.assign, "Label readout: argmax | kmeans");
  app.add_flag("--sec", options.sec, "Use the regression-coupled solver");
  app.add_option("--gamma-hat", options.gamma_hat, "Graph-term weight for --sec");
  app.add_option("--eta", options.eta, "Regression ridge for --sec");
  app.add_option("--max-iter", options.max_iter, "Outer iteration cap");
  app.add_option("--tol", options.tol, "Relative objective-change tolerance");
  app.add_option("--seed", options.seed, "RNG seed");
  app.add_option("--sweep-mu", sweep, "LO HI STEP over log10(mu)")->expected(3);
  app.add_option("--out", out_path, "Report output path (default: stdout)");
  app.add_option("--model-out", model_out, "Regression model output path (with --sec)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(mvgc::Error(mvgc::ErrorCode::invalid_argument, e.what(), "flags"));
  }

  try {
    options.sigma = parse_sigma(sigma_text);

    if (!sweep.empty()) {
      if (out_path.empty()) {
        throw mvgc::Error(mvgc::ErrorCode::invalid_argument, "--sweep-mu requires --out",
                          "flags");
      }
      const mvgc::SweepResult result = mvgc::sweep_mu(options, sweep[0], sweep[1], sweep[2]);
      write_text(out_path, result.cells.dump(2) + "\n");
      write_text(sibling_csv_path(out_path), result.csv);
      return 0;
    }

    mvgc::PipelineResult result = mvgc::run_pipeline(options);
    const std::string text = result.report.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      write_text(out_path, text);
    }
    if (!model_out.empty()) {
      if (!result.sec_model) {
        throw mvgc::Error(mvgc::ErrorCode::invalid_argument, "--model-out requires --sec",
                          "flags");
      }
      write_text(model_out, mvgc::sec_model_json(*result.sec_model, options.eta,
                                                 options.gamma_hat)
                                    .dump(2) +
                                "\n");
    }
    return 0;
  } catch (const mvgc::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(nlohmann::json{
        {"error", "internal_error"}, {"detail", e.what()}, {"where", "pipeline"}});
  }
}
