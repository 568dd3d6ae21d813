#include "shapelets/quality.hpp"

#include <algorithm>
#include <cmath>

namespace shapelets {

Orderline::Orderline(std::vector<OrderlineEntry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const OrderlineEntry& a, const OrderlineEntry& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              if (a.label != b.label) return a.label < b.label;
              return a.dataset_index < b.dataset_index;
            });
}

std::map<ClassLabel, std::size_t> Orderline::class_counts() const {
  std::map<ClassLabel, std::size_t> counts;
  for (const auto& e : entries_) ++counts[e.label];
  return counts;
}

double entropy(const std::map<ClassLabel, std::size_t>& class_counts) {
  std::size_t total = 0;
  for (const auto& [label, n] : class_counts) total += n;
  if (total == 0) throw InvalidInput("entropy: empty class counts");

  double h = 0.0;
  for (const auto& [label, n] : class_counts) {
    if (n == 0) continue;  // 0 log 0 == 0
    const double p = static_cast<double>(n) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

double information_gain(const std::map<ClassLabel, std::size_t>& total,
                        const std::map<ClassLabel, std::size_t>& left) {
  std::size_t n_total = 0, n_left = 0;
  std::map<ClassLabel, std::size_t> right = total;
  for (const auto& [label, n] : total) n_total += n;
  for (const auto& [label, n] : left) {
    auto it = right.find(label);
    if (it == right.end() || it->second < n)
      throw InvalidInput("information_gain: left counts exceed total");
    it->second -= n;
    n_left += n;
  }
  if (n_total == 0) throw InvalidInput("information_gain: empty total counts");

  const std::size_t n_right = n_total - n_left;
  double ig = entropy(total);
  if (n_left > 0)
    ig -= static_cast<double>(n_left) / static_cast<double>(n_total) * entropy(left);
  if (n_right > 0)
    ig -= static_cast<double>(n_right) / static_cast<double>(n_total) * entropy(right);
  return ig;
}

SplitAssessment best_split(const Orderline& ol) {
  const auto& entries = ol.entries();
  if (entries.empty()) throw InvalidInput("best_split: empty orderline");

  const auto total = ol.class_counts();

  SplitAssessment best;
  best.information_gain = 0.0;
  best.margin = 0.0;
  // Degenerate all-one-side split: threshold beyond every distance.
  best.split_threshold = entries.back().distance + 1.0;

  if (total.size() < 2) return best;

  bool found = false;
  std::map<ClassLabel, std::size_t> left;
  for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
    ++left[entries[i].label];
    if (entries[i].distance == entries[i + 1].distance) continue;

    const double ig = information_gain(total, left);
    const double margin = entries[i + 1].distance - entries[i].distance;
    const double threshold = (entries[i].distance + entries[i + 1].distance) / 2.0;

    const bool better =
        !found || ig > best.information_gain ||
        (ig == best.information_gain &&
         (margin > best.margin ||
          (margin == best.margin && threshold < best.split_threshold)));
    if (better) {
      best = {ig, threshold, margin};
      found = true;
    }
  }
  return best;
}

}  // namespace shapelets
