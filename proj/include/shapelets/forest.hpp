#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shapelets/core.hpp"
#include "shapelets/transform.hpp"

namespace shapelets {

struct ForestConfig {
  std::size_t n_trees = 500;
  std::size_t features_per_split = 0;  // 0: ceil(sqrt(feature count))
  std::size_t max_depth = 0;           // 0: unlimited
  std::size_t min_samples_leaf = 1;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

// Axis-aligned binary tree stored flat; node 0 is the root. feature == -1
// marks a leaf, which carries per-class training counts aligned with the
// model's class order. Rows with value < threshold go left.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::vector<std::size_t> counts;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;
};

struct ForestModel {
  std::vector<ClassLabel> classes;       // sorted ascending
  std::vector<std::string> feature_ids;  // column provenance echo
  std::string shapelet_fingerprint;      // hex fingerprint of the feature columns
  ForestConfig config;                   // resolved echo
  std::vector<DecisionTree> trees;

  std::size_t feature_count() const noexcept { return feature_ids.size(); }
};

struct Prediction {
  ClassLabel label;                   // argmax; ties go to the first class in order
  std::vector<double> probabilities;  // aligned with model classes, sums to 1
};

// Grows cfg.n_trees CART trees (Gini criterion) on bootstrap resamples.
// Each tree draws from its own RNG stream keyed by (seed, tree index), so
// the model is identical for any thread count.
ForestModel train_forest(const TransformMatrix& features, ForestConfig cfg,
                         std::size_t n_threads = 1);

// Mean of per-tree leaf class distributions.
Prediction predict_row(const ForestModel& model, std::span<const double> row);

std::vector<Prediction> predict(const ForestModel& model, const TransformMatrix& features,
                                std::size_t n_threads = 1);

// Out-of-bag accuracy by majority hard vote of the trees whose bootstrap
// sample missed the row. Rows seen by every tree are skipped. Replays each
// tree's bootstrap draws, so it needs the same features the model was
// trained on. Requires bootstrap on.
double oob_accuracy(const ForestModel& model, const TransformMatrix& features);

struct EvaluationMetrics {
  double accuracy = 0.0;
  std::vector<ClassLabel> classes;
  // Row = true class, column = predicted class, flattened row-major.
  std::vector<std::size_t> confusion;
  // Per class; nullopt when undefined (no predictions / no true instances).
  std::vector<std::optional<double>> precision;
  std::vector<std::optional<double>> recall;
  // Decile histogram of the predicted-class probability: band b counts rows
  // with probability in [b/10, (b+1)/10), last band closed at 1.
  std::vector<std::size_t> probability_bands;
  std::vector<std::size_t> correct_probability_bands;

  std::size_t confusion_at(std::size_t t, std::size_t p) const {
    return confusion[t * classes.size() + p];
  }
};

// Metrics from a filled confusion matrix (row = true, col = predicted);
// probability bands are left empty.
EvaluationMetrics metrics_from_confusion(const std::vector<ClassLabel>& classes,
                                         const std::vector<std::size_t>& confusion);

// Predicts every (labeled) row and aggregates the metrics.
EvaluationMetrics evaluate(const ForestModel& model, const TransformMatrix& features,
                           std::size_t n_threads = 1);

}  // namespace shapelets
