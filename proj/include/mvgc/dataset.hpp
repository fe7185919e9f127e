#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "mvgc/graph.hpp"
#include "mvgc/metrics.hpp"

namespace mvgc {

enum class DatasetKind { features, graphs };

/// Parsed manifest: per-view file paths (resolved relative to the manifest's
/// directory), the expected sample count, and an optional label file.
struct DatasetManifest {
  DatasetKind kind = DatasetKind::features;
  std::vector<std::filesystem::path> views;
  std::optional<std::filesystem::path> labels;
  Eigen::Index n = 0;
};

DatasetManifest read_manifest(const std::filesystem::path& path);

/// Comma-separated, headerless, '.'-decimal CSV; one sample per row.
Matrix read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const std::filesystem::path& path, const Matrix& m);

/// One integer label per line.
LabelVector read_label_file(const std::filesystem::path& path);

struct LoadedDataset {
  DatasetKind kind = DatasetKind::features;
  std::vector<FeatureMatrix> features;    // kind == features
  std::vector<SimilarityMatrix> graphs;   // kind == graphs, raw and validated
  std::optional<LabelVector> labels;
  Eigen::Index n = 0;
};

/// Reads the manifest and every referenced file, validating shapes against n.
/// Graph views must be symmetric within 1e-9 and nonnegative; they are
/// symmetrized exactly on load.
LoadedDataset load_views(const std::filesystem::path& manifest_path);

}  // namespace mvgc
