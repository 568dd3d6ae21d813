#include "shapelets/distance.hpp"

#include <cmath>
#include <limits>

namespace shapelets {

double dist(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("dist: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

namespace {

// One window: mean/sigma by the same two-pass scheme as znormalize, then the
// squared error against the shapelet accumulated left to right, abandoning
// once the partial sum exceeds `cutoff`. Returns +inf when abandoned.
double window_distance(std::span<const double> shapelet, const double* w,
                       NormalizationPolicy policy, double cutoff) {
  const std::size_t l = shapelet.size();
  double acc = 0.0;

  if (policy == NormalizationPolicy::None) {
    for (std::size_t j = 0; j < l; ++j) {
      const double d = w[j] - shapelet[j];
      acc += d * d;
      if (acc > cutoff) return std::numeric_limits<double>::infinity();
    }
    return acc;
  }

  double sum = 0.0;
  for (std::size_t j = 0; j < l; ++j) sum += w[j];
  const double mean = sum / static_cast<double>(l);
  double sq = 0.0;
  for (std::size_t j = 0; j < l; ++j) {
    const double d = w[j] - mean;
    sq += d * d;
  }
  const double sigma = std::sqrt(sq / static_cast<double>(l));

  if (sigma <= kStdEpsilon) {
    // Flat window normalizes to zeros.
    for (std::size_t j = 0; j < l; ++j) {
      acc += shapelet[j] * shapelet[j];
      if (acc > cutoff) return std::numeric_limits<double>::infinity();
    }
    return acc;
  }
  for (std::size_t j = 0; j < l; ++j) {
    const double d = (w[j] - mean) / sigma - shapelet[j];
    acc += d * d;
    if (acc > cutoff) return std::numeric_limits<double>::infinity();
  }
  return acc;
}

}  // namespace

MinDistanceResult min_subsequence_distance(std::span<const double> shapelet_values,
                                           std::span<const double> series,
                                           NormalizationPolicy policy,
                                           std::optional<double> best_so_far) {
  const std::size_t l = shapelet_values.size();
  const std::size_t m = series.size();
  if (l == 0) throw InvalidInput("min_subsequence_distance: empty shapelet");
  if (l > m)
    throw InvalidInput("min_subsequence_distance: shapelet longer than series (" +
                       std::to_string(l) + " > " + std::to_string(m) + ")");

  double best = best_so_far.value_or(std::numeric_limits<double>::infinity());
  double best_seen = std::numeric_limits<double>::infinity();
  std::size_t best_offset = 0;

  for (std::size_t off = 0; off + l <= m; ++off) {
    const double d = window_distance(shapelet_values, series.data() + off, policy, best);
    if (d < best_seen) {
      best_seen = d;
      best_offset = off;
      if (d < best) best = d;
    }
  }
  return {best_seen, best_offset};
}

MinDistanceResult length_normalized_min_distance(std::span<const double> shapelet_values,
                                                 std::span<const double> series,
                                                 NormalizationPolicy policy,
                                                 std::optional<double> best_so_far) {
  std::optional<double> raw_cutoff;
  if (best_so_far)
    raw_cutoff = *best_so_far * static_cast<double>(shapelet_values.size());
  MinDistanceResult r =
      min_subsequence_distance(shapelet_values, series, policy, raw_cutoff);
  r.distance /= static_cast<double>(shapelet_values.size());
  return r;
}

}  // namespace shapelets
