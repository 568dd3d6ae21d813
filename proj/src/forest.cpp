#include "shapelets/forest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "shapelets/errors.hpp"
#include "shapelets/parallel.hpp"
#include "shapelets/rng.hpp"

namespace shapelets {

namespace {

double gini(const std::vector<std::size_t>& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double g = 1.0;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    g -= p * p;
  }
  return g;
}

struct TreeBuilder {
  const TransformMatrix& x;
  const std::vector<std::size_t>& y;
  std::size_t num_classes;
  const ForestConfig& cfg;
  Rng& rng;
  std::vector<TreeNode> nodes;

  std::int32_t make_leaf(std::vector<std::size_t> counts) {
    TreeNode leaf;
    leaf.counts = std::move(counts);
    nodes.push_back(std::move(leaf));
    return static_cast<std::int32_t>(nodes.size() - 1);
  }

  // Preorder growth; the RNG is consumed in a schedule-independent order.
  std::int32_t grow(std::vector<std::size_t> rows, std::size_t depth) {
    const std::size_t n = rows.size();
    std::vector<std::size_t> counts(num_classes, 0);
    for (std::size_t r : rows) ++counts[y[r]];

    bool pure = false;
    for (std::size_t c : counts)
      if (c == n) pure = true;
    const bool depth_capped = cfg.max_depth != 0 && depth >= cfg.max_depth;
    if (pure || n < 2 * cfg.min_samples_leaf || depth_capped) return make_leaf(std::move(counts));

    const std::vector<std::size_t> feats =
        rng.sample_without_replacement(x.cols, cfg.features_per_split);

    const double parent = gini(counts, n);
    double best_gain = 0.0;
    std::size_t best_feature = 0;
    double best_threshold = 0.0;

    std::vector<std::pair<double, std::size_t>> vals(n);
    std::vector<std::size_t> left(num_classes);
    for (std::size_t f : feats) {
      for (std::size_t i = 0; i < n; ++i) vals[i] = {x.at(rows[i], f), y[rows[i]]};
      std::sort(vals.begin(), vals.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      std::fill(left.begin(), left.end(), 0);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        ++left[vals[i].second];
        if (vals[i].first == vals[i + 1].first) continue;
        const std::size_t n_left = i + 1;
        const std::size_t n_right = n - n_left;
        if (n_left < cfg.min_samples_leaf || n_right < cfg.min_samples_leaf) continue;
        const double mid = (vals[i].first + vals[i + 1].first) / 2.0;
        // Adjacent representable values have no midpoint strictly between
        // them; such a boundary cannot be expressed as a threshold.
        if (!(vals[i].first < mid && mid < vals[i + 1].first)) continue;
        std::vector<std::size_t> right(num_classes);
        for (std::size_t c = 0; c < num_classes; ++c) right[c] = counts[c] - left[c];
        const double weighted = (static_cast<double>(n_left) * gini(left, n_left) +
                                 static_cast<double>(n_right) * gini(right, n_right)) /
                                static_cast<double>(n);
        const double gain = parent - weighted;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = f;
          best_threshold = mid;
        }
      }
    }
    if (best_gain <= 0.0) return make_leaf(std::move(counts));

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows)
      (x.at(r, best_feature) < best_threshold ? left_rows : right_rows).push_back(r);

    const auto index = static_cast<std::int32_t>(nodes.size());
    TreeNode split;
    split.feature = static_cast<std::int32_t>(best_feature);
    split.threshold = best_threshold;
    nodes.push_back(std::move(split));
    const std::int32_t l = grow(std::move(left_rows), depth + 1);
    const std::int32_t r = grow(std::move(right_rows), depth + 1);
    nodes[static_cast<std::size_t>(index)].left = l;
    nodes[static_cast<std::size_t>(index)].right = r;
    return index;
  }
};

std::vector<std::size_t> bootstrap_rows(Rng& rng, std::size_t n, bool bootstrap) {
  std::vector<std::size_t> rows(n);
  if (bootstrap) {
    for (std::size_t i = 0; i < n; ++i) rows[i] = static_cast<std::size_t>(rng.below(n));
  } else {
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  }
  return rows;
}

const TreeNode& descend(const DecisionTree& tree, std::span<const double> row) {
  const TreeNode* node = &tree.nodes.front();
  while (node->feature >= 0) {
    const std::int32_t next =
        row[static_cast<std::size_t>(node->feature)] < node->threshold ? node->left : node->right;
    node = &tree.nodes[static_cast<std::size_t>(next)];
  }
  return *node;
}

std::size_t argmax_counts(const std::vector<std::size_t>& counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c)
    if (counts[c] > counts[best]) best = c;
  return best;
}

std::size_t class_index(const ForestModel& model, const ClassLabel& label) {
  const auto it = std::lower_bound(model.classes.begin(), model.classes.end(), label);
  if (it == model.classes.end() || *it != label)
    throw InvalidInput("label '" + label + "' is not one of the model's classes");
  return static_cast<std::size_t>(it - model.classes.begin());
}

}  // namespace

ForestModel train_forest(const TransformMatrix& features, ForestConfig cfg,
                         std::size_t n_threads) {
  if (!features.has_labels()) throw InvalidInput("training requires labels");
  if (features.rows < 2) throw InvalidInput("training requires at least 2 rows");
  if (features.cols == 0) throw InvalidInput("training requires at least one feature");
  if (cfg.n_trees == 0) throw InvalidInput("n_trees must be at least 1");
  if (cfg.min_samples_leaf == 0) throw InvalidInput("min_samples_leaf must be positive");
  if (cfg.features_per_split == 0)
    cfg.features_per_split = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(features.cols))));
  if (cfg.features_per_split > features.cols)
    throw InvalidInput("features_per_split exceeds the feature count");

  ForestModel model;
  model.classes.assign(features.labels.begin(), features.labels.end());
  std::sort(model.classes.begin(), model.classes.end());
  model.classes.erase(std::unique(model.classes.begin(), model.classes.end()),
                      model.classes.end());
  if (model.classes.size() < 2) throw InvalidInput("training requires at least 2 classes");
  model.feature_ids = features.shapelet_ids;
  model.config = cfg;

  std::vector<std::size_t> y(features.rows);
  for (std::size_t i = 0; i < features.rows; ++i) y[i] = class_index(model, features.labels[i]);

  model.trees.resize(cfg.n_trees);
  parallel_for(cfg.n_trees, n_threads, [&](std::size_t t) {
    Rng rng(Rng::derive(cfg.seed, t));
    std::vector<std::size_t> rows = bootstrap_rows(rng, features.rows, cfg.bootstrap);
    TreeBuilder builder{features, y, model.classes.size(), cfg, rng, {}};
    builder.grow(std::move(rows), 0);
    model.trees[t].nodes = std::move(builder.nodes);
  });
  return model;
}

Prediction predict_row(const ForestModel& model, std::span<const double> row) {
  if (row.size() != model.feature_count())
    throw InvalidInput("row has " + std::to_string(row.size()) + " features, model expects " +
                       std::to_string(model.feature_count()));
  const std::size_t k = model.classes.size();
  std::vector<double> acc(k, 0.0);
  for (const DecisionTree& tree : model.trees) {
    const TreeNode& leaf = descend(tree, row);
    std::size_t total = 0;
    for (std::size_t c : leaf.counts) total += c;
    for (std::size_t c = 0; c < k; ++c)
      acc[c] += static_cast<double>(leaf.counts[c]) / static_cast<double>(total);
  }
  Prediction p;
  p.probabilities.resize(k);
  std::size_t best = 0;
  for (std::size_t c = 0; c < k; ++c) {
    p.probabilities[c] = acc[c] / static_cast<double>(model.trees.size());
    if (p.probabilities[c] > p.probabilities[best]) best = c;
  }
  p.label = model.classes[best];
  return p;
}

std::vector<Prediction> predict(const ForestModel& model, const TransformMatrix& features,
                                std::size_t n_threads) {
  std::vector<Prediction> out(features.rows);
  parallel_for(features.rows, n_threads,
               [&](std::size_t i) { out[i] = predict_row(model, features.row(i)); });
  return out;
}

double oob_accuracy(const ForestModel& model, const TransformMatrix& features) {
  if (!model.config.bootstrap) throw InvalidInput("out-of-bag accuracy requires bootstrap");
  if (!features.has_labels()) throw InvalidInput("out-of-bag accuracy requires labels");
  const std::size_t n = features.rows;
  const std::size_t k = model.classes.size();
  std::vector<std::size_t> votes(n * k, 0);
  std::vector<bool> in_bag(n);
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    // The bootstrap draws are the first n outputs of the tree's RNG stream,
    // so membership is replayable without storing index lists in the model.
    Rng rng(Rng::derive(model.config.seed, t));
    std::fill(in_bag.begin(), in_bag.end(), false);
    for (std::size_t i = 0; i < n; ++i) in_bag[static_cast<std::size_t>(rng.below(n))] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (in_bag[i]) continue;
      const TreeNode& leaf = descend(model.trees[t], features.row(i));
      ++votes[i * k + argmax_counts(leaf.counts)];
    }
  }
  std::size_t scored = 0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> v(votes.begin() + static_cast<std::ptrdiff_t>(i * k),
                               votes.begin() + static_cast<std::ptrdiff_t>((i + 1) * k));
    std::size_t total = 0;
    for (std::size_t c : v) total += c;
    if (total == 0) continue;
    ++scored;
    if (model.classes[argmax_counts(v)] == features.labels[i]) ++correct;
  }
  if (scored == 0) throw EmptyResult("every row appeared in every bootstrap sample");
  return static_cast<double>(correct) / static_cast<double>(scored);
}

EvaluationMetrics metrics_from_confusion(const std::vector<ClassLabel>& classes,
                                         const std::vector<std::size_t>& confusion) {
  const std::size_t k = classes.size();
  if (confusion.size() != k * k) throw InvalidInput("confusion matrix size must be classes^2");
  EvaluationMetrics m;
  m.classes = classes;
  m.confusion = confusion;
  std::size_t total = 0;
  std::size_t diag = 0;
  for (std::size_t t = 0; t < k; ++t)
    for (std::size_t p = 0; p < k; ++p) {
      total += confusion[t * k + p];
      if (t == p) diag += confusion[t * k + p];
    }
  if (total == 0) throw InvalidInput("confusion matrix is empty");
  m.accuracy = static_cast<double>(diag) / static_cast<double>(total);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t col = 0;
    std::size_t row = 0;
    for (std::size_t t = 0; t < k; ++t) col += confusion[t * k + c];
    for (std::size_t p = 0; p < k; ++p) row += confusion[c * k + p];
    const std::size_t tp = confusion[c * k + c];
    m.precision.push_back(col == 0 ? std::optional<double>()
                                   : static_cast<double>(tp) / static_cast<double>(col));
    m.recall.push_back(row == 0 ? std::optional<double>()
                                : static_cast<double>(tp) / static_cast<double>(row));
  }
  return m;
}

EvaluationMetrics evaluate(const ForestModel& model, const TransformMatrix& features,
                           std::size_t n_threads) {
  if (!features.has_labels()) throw InvalidInput("evaluation requires labels");
  const std::size_t k = model.classes.size();
  const std::vector<Prediction> preds = predict(model, features, n_threads);
  std::vector<std::size_t> confusion(k * k, 0);
  std::vector<std::size_t> bands(10, 0);
  std::vector<std::size_t> correct_bands(10, 0);
  for (std::size_t i = 0; i < features.rows; ++i) {
    const std::size_t t = class_index(model, features.labels[i]);
    const std::size_t p = class_index(model, preds[i].label);
    ++confusion[t * k + p];
    const double prob = preds[i].probabilities[p];
    const std::size_t band = std::min<std::size_t>(9, static_cast<std::size_t>(prob * 10.0));
    ++bands[band];
    if (t == p) ++correct_bands[band];
  }
  EvaluationMetrics m = metrics_from_confusion(model.classes, confusion);
  m.probability_bands = std::move(bands);
  m.correct_probability_bands = std::move(correct_bands);
  return m;
}

}  // namespace shapelets
