#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shapelets/core.hpp"
#include "shapelets/discovery.hpp"
#include "shapelets/forest.hpp"
#include "shapelets/transform.hpp"

namespace shapelets::io {

// All numeric CSV output uses 9 significant digits.
std::string format_double(double v);

std::uint64_t fnv1a(std::string_view bytes);
std::string to_hex(std::uint64_t v);

// Fingerprint of a feature space: hash of the newline-joined provenance ids.
std::string feature_fingerprint(const std::vector<std::string>& ids);
std::string shapelet_fingerprint(const ShapeletSet& set);

// ---- dataset CSV ---------------------------------------------------------
// One series per line: label,v0,v1,...  Unlabeled rows use the "?"
// placeholder. Rows get ids "row0", "row1", ... in file order. '#' starts a
// comment; "# key: value" comments carry file metadata (sample_rate_hz).
// Series lengths may differ between rows.

struct DatasetReadResult {
  LabeledDataset data;
  std::optional<double> sample_rate_hz;
  bool labeled = false;  // true when no label is the "?" placeholder
};

DatasetReadResult read_dataset_csv(const std::string& path, bool skip_header = false);
void write_dataset_csv(const std::string& path, const LabeledDataset& data,
                       std::optional<double> sample_rate_hz);

// ---- raw sample stream ----------------------------------------------------
// Whitespace/newline-separated samples of one continuous recording, with
// optional "# sample_rate_hz:" / "# id:" metadata comments.

TimeSeries read_stream(const std::string& path, std::optional<double> rate_override,
                       const std::string& fallback_id);

// ---- shapelet set JSON ----------------------------------------------------

struct ShapeletSetDocument {
  ShapeletSet set;
  std::string config_hash;
  std::string fingerprint;
};

void write_shapelet_set_json(const std::string& path, const ShapeletSet& set,
                             const std::string& config_hash);
ShapeletSetDocument read_shapelet_set_json(const std::string& path);

// ---- transform CSV ---------------------------------------------------------
// Header = shapelet ids (+ "label" when labeled); provenance comments carry
// the producer's config hash and the shapelet-set fingerprint.

struct TransformDocument {
  TransformMatrix matrix;
  std::string config_hash;
  std::string fingerprint;
};

void write_transform_csv(const std::string& path, const TransformMatrix& m,
                         const std::string& config_hash, const std::string& fingerprint);
TransformDocument read_transform_csv(const std::string& path);

// ---- forest model JSON ------------------------------------------------------

struct ModelDocument {
  ForestModel model;
  std::string config_hash;
};

void write_model_json(const std::string& path, const ForestModel& model,
                      const std::string& config_hash);
ModelDocument read_model_json(const std::string& path);

// ---- predictions CSV / metrics JSON ----------------------------------------

void write_predictions_csv(const std::string& path, const std::vector<Prediction>& predictions,
                           const std::vector<ClassLabel>& classes,
                           const std::string& config_hash);

void write_metrics_json(const std::string& path, const EvaluationMetrics& metrics,
                        const std::string& config_hash);

}  // namespace shapelets::io
