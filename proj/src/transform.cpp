#include "shapelets/transform.hpp"

#include <algorithm>
#include <string>

#include "shapelets/distance.hpp"
#include "shapelets/errors.hpp"
#include "shapelets/parallel.hpp"

namespace shapelets {

std::vector<double> transform_row(const TimeSeries& series, const ShapeletSet& set) {
  std::vector<double> out;
  out.reserve(set.size());
  for (const Shapelet& s : set.shapelets) {
    if (s.length > series.size())
      throw InvalidInput("series '" + series.id() + "' (length " +
                         std::to_string(series.size()) + ") is shorter than shapelet '" + s.id() +
                         "' (length " + std::to_string(s.length) + ")");
    const auto r = set.config.length_normalized
                       ? length_normalized_min_distance(s.values, series.values(),
                                                        set.config.normalization)
                       : min_subsequence_distance(s.values, series.values(),
                                                  set.config.normalization);
    out.push_back(r.distance);
  }
  return out;
}

TransformMatrix shapelet_transform(const std::vector<TimeSeries>& series,
                                   const std::vector<ClassLabel>& labels, const ShapeletSet& set,
                                   std::size_t n_threads) {
  if (!labels.empty() && labels.size() != series.size())
    throw InvalidInput("label count does not match series count");

  TransformMatrix m;
  m.rows = series.size();
  m.cols = set.size();
  m.values.assign(m.rows * m.cols, 0.0);
  m.labels = labels;
  for (const Shapelet& s : set.shapelets) m.shapelet_ids.push_back(s.id());

  parallel_for(m.rows, n_threads, [&](std::size_t i) {
    const std::vector<double> row = transform_row(series[i], set);
    std::copy(row.begin(), row.end(), m.values.begin() + static_cast<std::ptrdiff_t>(i * m.cols));
  });
  return m;
}

TransformMatrix shapelet_transform(const LabeledDataset& data, const ShapeletSet& set,
                                   std::size_t n_threads) {
  std::vector<TimeSeries> series;
  std::vector<ClassLabel> labels;
  series.reserve(data.size());
  labels.reserve(data.size());
  for (const auto& e : data.entries()) {
    series.push_back(e.series);
    labels.push_back(e.label);
  }
  return shapelet_transform(series, labels, set, n_threads);
}

}  // namespace shapelets
