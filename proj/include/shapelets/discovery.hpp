#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "shapelets/core.hpp"
#include "shapelets/distance.hpp"
#include "shapelets/quality.hpp"

namespace shapelets {

struct DiscoveryConfig {
  std::size_t min_len = 3;
  std::size_t max_len = 0;        // 0: length of the shortest series
  std::size_t max_shapelets = 0;  // 0: 10 * dataset size
  double quality_threshold = 0.05;
  // Approximation knobs; 1/1 is the exact exhaustive search.
  std::size_t length_step = 1;
  std::size_t position_stride = 1;
  NormalizationPolicy normalization = NormalizationPolicy::ZNormalize;
  // Divide each orderline distance by the candidate length so candidates of
  // different lengths compete on one quality scale.
  bool length_normalized = true;
  std::uint64_t seed = 0;
};

// A retained subsequence: normalized values plus provenance and the split
// statistics it earned on the training set.
struct Shapelet {
  std::vector<double> values;
  std::string source_id;
  std::size_t offset = 0;
  std::size_t length = 0;
  double ig = 0.0;
  double split_threshold = 0.0;
  double margin = 0.0;
  ClassLabel class_label;

  // Provenance key used in transform headers and fingerprints.
  std::string id() const;
};

// Canonical total order: ig desc, margin desc, length asc, source_id asc,
// offset asc. Discovery merges parallel results through this order, so the
// output is independent of worker scheduling.
bool shapelet_order(const Shapelet& a, const Shapelet& b);

struct ShapeletSet {
  std::vector<Shapelet> shapelets;  // sorted by shapelet_order
  DiscoveryConfig config;           // resolved echo (max_len / max_shapelets filled in)

  std::size_t size() const noexcept { return shapelets.size(); }
};

struct CandidateAssessment {
  double ig = 0.0;
  double split_threshold = 0.0;
  double margin = 0.0;
  ClassLabel class_label;
};

// All slices of ts with length in {min_len, min_len+step, ...} <= max_len
// and offsets stepped by position_stride. Empty when the series is shorter
// than min_len.
std::vector<Subsequence> generate_candidates(const TimeSeries& ts, const DiscoveryConfig& cfg);

// Builds the orderline of minimum distances from the (raw) candidate slice
// to every series in the dataset, finds the best split, and labels the
// candidate with the majority class strictly below the threshold (ties to
// the lexicographically smallest label).
CandidateAssessment evaluate_candidate(const Subsequence& c, const LabeledDataset& data,
                                       const DiscoveryConfig& cfg);

// Greedy pass over a quality-sorted list: a shapelet is kept iff no
// already-kept shapelet from the same source overlaps its index range.
std::vector<Shapelet> remove_self_similar(std::vector<Shapelet> sorted_by_quality);

// Algorithm: evaluate every candidate of every series, drop those under the
// quality threshold, prune self-similar ones, and keep the best capped at
// floor(r / numC) per class and r overall.
ShapeletSet discover(const LabeledDataset& data, DiscoveryConfig cfg, std::size_t n_threads = 1);

}  // namespace shapelets
