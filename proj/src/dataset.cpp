#include "mvgc/dataset.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mvgc {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::parse_error, "cannot open file", path.string());
  }
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

double parse_double(std::string_view field, const std::filesystem::path& path,
                    std::size_t line) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::parse_error,
                "bad number '" + std::string(field) + "' at line " + std::to_string(line),
                path.string());
  }
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

}  // namespace

DatasetManifest read_manifest(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("manifest: ") + e.what(), path.string());
  }

  DatasetManifest manifest;
  try {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "features") {
      manifest.kind = DatasetKind::features;
    } else if (kind == "graphs") {
      manifest.kind = DatasetKind::graphs;
    } else {
      throw Error(ErrorCode::parse_error, "manifest kind must be 'features' or 'graphs'",
                  path.string());
    }
    manifest.n = doc.at("n").get<Eigen::Index>();
    const auto base = path.has_parent_path() ? path.parent_path()
                                             : std::filesystem::path(".");
    for (const auto& v : doc.at("views")) {
      std::filesystem::path p = v.get<std::string>();
      manifest.views.push_back(p.is_absolute() ? p : base / p);
    }
    if (doc.contains("labels") && !doc["labels"].is_null()) {
      std::filesystem::path p = doc["labels"].get<std::string>();
      manifest.labels = p.is_absolute() ? p : base / p;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("manifest: ") + e.what(), path.string());
  }
  if (manifest.views.empty()) {
    throw Error(ErrorCode::parse_error, "manifest lists no views", path.string());
  }
  if (manifest.n < 2) {
    throw Error(ErrorCode::parse_error, "manifest n must be at least 2", path.string());
  }
  return manifest;
}

Matrix read_csv_matrix(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw Error(ErrorCode::parse_error, "file is empty", path.string());
  }

  const std::size_t cols = split_fields(lines[0]).size();
  Matrix out(static_cast<Eigen::Index>(lines.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r]);
    if (fields.size() != cols) {
      throw Error(ErrorCode::parse_error,
                  "expected " + std::to_string(cols) + " columns at line " +
                      std::to_string(r + 1) + ", got " + std::to_string(fields.size()),
                  path.string());
    }
    for (std::size_t c = 0; c < cols; ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_double(fields[c], path, r + 1);
    }
  }
  if (!out.allFinite()) {
    throw Error(ErrorCode::non_finite, "file contains non-finite values", path.string());
  }
  return out;
}

void write_csv_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::parse_error, "cannot open file for writing", path.string());
  }
  char buf[64];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
      out << buf << (c + 1 == m.cols() ? "" : ",");
    }
    out << '\n';
  }
}

LabelVector read_label_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  if (lines.empty()) {
    throw Error(ErrorCode::parse_error, "label file is empty", path.string());
  }
  LabelVector labels;
  labels.reserve(lines.size());
  for (std::size_t r = 0; r < lines.size(); ++r) {
    int value = 0;
    const char* begin = lines[r].data();
    const char* end = lines[r].data() + lines[r].size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || value < 0) {
      throw Error(ErrorCode::parse_error,
                  "bad label at line " + std::to_string(r + 1), path.string());
    }
    labels.push_back(value);
  }
  return labels;
}

LoadedDataset load_views(const std::filesystem::path& manifest_path) {
  const DatasetManifest manifest = read_manifest(manifest_path);

  LoadedDataset out;
  out.kind = manifest.kind;
  out.n = manifest.n;

  int view_id = 0;
  for (const auto& view_path : manifest.views) {
    Matrix m = read_csv_matrix(view_path);
    if (m.rows() != manifest.n) {
      throw Error(ErrorCode::shape_mismatch,
                  "expected " + std::to_string(manifest.n) + " rows, got " +
                      std::to_string(m.rows()),
                  view_path.string());
    }
    if (manifest.kind == DatasetKind::features) {
      out.features.push_back(FeatureMatrix{std::move(m), view_id});
    } else {
      if (m.cols() != manifest.n) {
        throw Error(ErrorCode::shape_mismatch, "graph view is not square",
                    view_path.string());
      }
      if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
        throw Error(ErrorCode::asymmetric_graph, "graph view is not symmetric",
                    view_path.string());
      }
      if (m.minCoeff() < 0.0) {
        throw Error(ErrorCode::invalid_argument, "graph view has negative entries",
                    view_path.string());
      }
      SimilarityMatrix sim;
      sim.data = 0.5 * (m + m.transpose());
      sim.normalization = Normalization::raw;
      out.graphs.push_back(std::move(sim));
    }
    ++view_id;
  }

  if (manifest.labels) {
    LabelVector labels = read_label_file(*manifest.labels);
    if (static_cast<Eigen::Index>(labels.size()) != manifest.n) {
      throw Error(ErrorCode::shape_mismatch,
                  "label count differs from manifest n", manifest.labels->string());
    }
    out.labels = std::move(labels);
  }
  return out;
}

}  // namespace mvgc
