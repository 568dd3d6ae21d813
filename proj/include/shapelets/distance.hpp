#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shapelets/core.hpp"

namespace shapelets {

// A contiguous slice of a source series, kept with its provenance.
struct Subsequence {
  std::string source_id;
  std::size_t offset = 0;
  std::vector<double> values;

  std::size_t length() const noexcept { return values.size(); }
};

// Squared Euclidean distance between two equal-length sequences, accumulated
// left to right.
double dist(std::span<const double> x, std::span<const double> y);

struct MinDistanceResult {
  double distance = 0.0;
  std::size_t best_offset = 0;
};

// Minimum of dist(shapelet_values, normalize(window)) over all sliding
// windows of the series, with the window normalized per `policy`.
//
// shapelet_values must already be normalized per the same policy. Ties on
// the minimum go to the smallest offset. When best_so_far is given, any
// window whose partial sum exceeds it is abandoned; whenever the true
// minimum is <= best_so_far the result is exactly the full-scan minimum,
// and otherwise the distance comes back +inf (no window within the bound).
// Without best_so_far the scan prunes against its own running minimum and
// the result always equals the full scan.
MinDistanceResult min_subsequence_distance(std::span<const double> shapelet_values,
                                           std::span<const double> series,
                                           NormalizationPolicy policy,
                                           std::optional<double> best_so_far = std::nullopt);

// Same minimum divided by the shapelet length, so candidates of different
// lengths compete on one scale. best_so_far is in the divided units.
MinDistanceResult length_normalized_min_distance(std::span<const double> shapelet_values,
                                                 std::span<const double> series,
                                                 NormalizationPolicy policy,
                                                 std::optional<double> best_so_far = std::nullopt);

}  // namespace shapelets
