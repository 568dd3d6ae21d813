#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "shapelets/core.hpp"
#include "shapelets/discovery.hpp"

namespace shapelets {

// Row-major n x k matrix of minimum shapelet distances, with column
// provenance and optionally the class label of each row.
struct TransformMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;             // rows * cols, row-major
  std::vector<ClassLabel> labels;         // empty, or one per row
  std::vector<std::string> shapelet_ids;  // one per column, in ShapeletSet order

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values).subspan(r * cols, cols);
  }
  bool has_labels() const noexcept { return !labels.empty(); }
};

// One row of the transform: the minimum distance from each shapelet to the
// series. Normalization and length-normalization settings come from the
// set's config echo, never from the caller, so training and inference can
// not drift apart.
std::vector<double> transform_row(const TimeSeries& series, const ShapeletSet& set);

// Full transform; labels may be empty (unlabeled data) or one per series.
TransformMatrix shapelet_transform(const std::vector<TimeSeries>& series,
                                   const std::vector<ClassLabel>& labels, const ShapeletSet& set,
                                   std::size_t n_threads = 1);

TransformMatrix shapelet_transform(const LabeledDataset& data, const ShapeletSet& set,
                                   std::size_t n_threads = 1);

}  // namespace shapelets
