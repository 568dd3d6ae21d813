#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "shapelets/core.hpp"

namespace shapelets {

struct OrderlineEntry {
  double distance = 0.0;
  ClassLabel label;
  std::size_t dataset_index = 0;
};

// Sorted (distance, label) pairs of one candidate against every series.
// Ties in distance keep a stable order by (label, dataset index).
class Orderline {
 public:
  explicit Orderline(std::vector<OrderlineEntry> entries);

  const std::vector<OrderlineEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::map<ClassLabel, std::size_t> class_counts() const;

 private:
  std::vector<OrderlineEntry> entries_;
};

// Shannon entropy in bits: -sum p_c log2 p_c. Base 2 keeps the information
// gain of a binary problem inside [0, 1].
double entropy(const std::map<ClassLabel, std::size_t>& class_counts);

// H(total) minus the count-weighted entropies of `left` and its complement.
double information_gain(const std::map<ClassLabel, std::size_t>& total,
                        const std::map<ClassLabel, std::size_t>& left);

struct SplitAssessment {
  double information_gain = 0.0;
  // Midpoint between the two consecutive distinct distances straddling the
  // best split; placed beyond the last distance when no valid split exists.
  double split_threshold = 0.0;
  double margin = 0.0;
};

// Scans every split point between consecutive distinct distances and returns
// the maximum-IG assessment. Ties on IG are broken by larger margin, then
// smaller threshold. Single-class or all-equal-distance orderlines yield
// IG 0 with zero margin rather than an error.
SplitAssessment best_split(const Orderline& ol);

}  // namespace shapelets
