#include "shapelets/discovery.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "shapelets/errors.hpp"
#include "shapelets/parallel.hpp"

namespace shapelets {

namespace {

struct CandidateRef {
  std::size_t entry = 0;
  std::size_t offset = 0;
  std::size_t length = 0;
};

DiscoveryConfig resolve_config(DiscoveryConfig cfg, const LabeledDataset& data) {
  if (cfg.min_len < 3) throw InvalidInput("min_len must be at least 3");
  if (cfg.length_step == 0) throw InvalidInput("length_step must be positive");
  if (cfg.position_stride == 0) throw InvalidInput("position_stride must be positive");
  const std::size_t shortest = data.min_series_length();
  if (cfg.max_len == 0) cfg.max_len = shortest;
  if (cfg.max_len < cfg.min_len) throw InvalidInput("max_len must be at least min_len");
  // Every candidate must slide across every series, so lengths are capped by
  // the shortest one.
  if (cfg.max_len > shortest) throw InvalidInput("max_len exceeds the shortest series length");
  if (cfg.max_shapelets == 0) cfg.max_shapelets = 10 * data.size();
  const std::size_t num_classes = data.class_count();
  if (cfg.max_shapelets < num_classes)
    throw InvalidInput("max_shapelets must be at least the number of classes");
  return cfg;
}

std::vector<double> candidate_values(const Subsequence& c, NormalizationPolicy policy) {
  return policy == NormalizationPolicy::ZNormalize ? znormalize(c.values) : c.values;
}

Subsequence slice(const LabeledEntry& entry, const CandidateRef& ref) {
  const auto& v = entry.series.values();
  return Subsequence{entry.series.id(), ref.offset,
                     {v.begin() + static_cast<std::ptrdiff_t>(ref.offset),
                      v.begin() + static_cast<std::ptrdiff_t>(ref.offset + ref.length)}};
}

}  // namespace

std::string Shapelet::id() const {
  return source_id + ":" + std::to_string(offset) + ":" + std::to_string(length);
}

bool shapelet_order(const Shapelet& a, const Shapelet& b) {
  if (a.ig != b.ig) return a.ig > b.ig;
  if (a.margin != b.margin) return a.margin > b.margin;
  if (a.length != b.length) return a.length < b.length;
  if (a.source_id != b.source_id) return a.source_id < b.source_id;
  return a.offset < b.offset;
}

std::vector<Subsequence> generate_candidates(const TimeSeries& ts, const DiscoveryConfig& cfg) {
  if (cfg.min_len < 3) throw InvalidInput("min_len must be at least 3");
  if (cfg.length_step == 0) throw InvalidInput("length_step must be positive");
  if (cfg.position_stride == 0) throw InvalidInput("position_stride must be positive");
  const std::size_t n = ts.size();
  const std::size_t max_len = cfg.max_len == 0 ? n : cfg.max_len;
  std::vector<Subsequence> out;
  for (std::size_t len = cfg.min_len; len <= max_len && len <= n; len += cfg.length_step) {
    for (std::size_t off = 0; off + len <= n; off += cfg.position_stride) {
      const auto& v = ts.values();
      out.push_back(Subsequence{ts.id(), off,
                                {v.begin() + static_cast<std::ptrdiff_t>(off),
                                 v.begin() + static_cast<std::ptrdiff_t>(off + len)}});
    }
  }
  return out;
}

CandidateAssessment evaluate_candidate(const Subsequence& c, const LabeledDataset& data,
                                       const DiscoveryConfig& cfg) {
  if (c.values.empty()) throw InvalidInput("candidate is empty");
  const std::vector<double> shape = candidate_values(c, cfg.normalization);
  std::vector<OrderlineEntry> entries;
  entries.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& entry = data[i];
    const double d =
        cfg.length_normalized
            ? length_normalized_min_distance(shape, entry.series.values(), cfg.normalization)
                  .distance
            : min_subsequence_distance(shape, entry.series.values(), cfg.normalization).distance;
    entries.push_back(OrderlineEntry{d, entry.label, i});
  }
  const Orderline ol(std::move(entries));
  const SplitAssessment split = best_split(ol);

  CandidateAssessment out;
  out.ig = split.information_gain;
  out.split_threshold = split.split_threshold;
  out.margin = split.margin;
  // The threshold always sits above the smallest distance, so the below-side
  // is never empty. std::map iteration gives the smallest label on count ties.
  std::map<ClassLabel, std::size_t> below;
  for (const auto& e : ol.entries())
    if (e.distance < out.split_threshold) ++below[e.label];
  std::size_t best_count = 0;
  for (const auto& [label, count] : below) {
    if (count > best_count) {
      out.class_label = label;
      best_count = count;
    }
  }
  return out;
}

std::vector<Shapelet> remove_self_similar(std::vector<Shapelet> sorted_by_quality) {
  std::vector<Shapelet> kept;
  kept.reserve(sorted_by_quality.size());
  for (auto& s : sorted_by_quality) {
    bool overlaps = false;
    for (const auto& k : kept) {
      if (k.source_id != s.source_id) continue;
      const bool disjoint = s.offset + s.length <= k.offset || k.offset + k.length <= s.offset;
      if (!disjoint) {
        overlaps = true;
        break;
      }
    }
    if (!overlaps) kept.push_back(std::move(s));
  }
  return kept;
}

ShapeletSet discover(const LabeledDataset& data, DiscoveryConfig cfg, std::size_t n_threads) {
  ValidationReport report = validate_dataset(data, cfg.min_len);
  {
    std::set<std::string> seen;
    for (const auto& entry : data.entries())
      if (!seen.insert(entry.series.id()).second)
        report.issues.push_back("duplicate series id '" + entry.series.id() + "'");
  }
  if (!report.ok()) throw ValidationError("dataset validation failed", report.issues);
  cfg = resolve_config(cfg, data);

  // Descriptors in (entry, length, offset) order; evaluation writes into
  // per-index slots so the merge below is schedule-independent.
  std::vector<CandidateRef> refs;
  for (std::size_t e = 0; e < data.size(); ++e) {
    const std::size_t n = data[e].series.size();
    for (std::size_t len = cfg.min_len; len <= cfg.max_len; len += cfg.length_step)
      for (std::size_t off = 0; off + len <= n; off += cfg.position_stride)
        refs.push_back(CandidateRef{e, off, len});
  }

  std::vector<CandidateAssessment> results(refs.size());
  parallel_for(refs.size(), n_threads, [&](std::size_t i) {
    results[i] = evaluate_candidate(slice(data[refs[i].entry], refs[i]), data, cfg);
  });

  std::vector<Shapelet> kept;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (results[i].ig < cfg.quality_threshold) continue;
    const CandidateRef& ref = refs[i];
    Subsequence c = slice(data[ref.entry], ref);
    Shapelet s;
    s.values = candidate_values(c, cfg.normalization);
    s.source_id = c.source_id;
    s.offset = ref.offset;
    s.length = ref.length;
    s.ig = results[i].ig;
    s.split_threshold = results[i].split_threshold;
    s.margin = results[i].margin;
    s.class_label = results[i].class_label;
    kept.push_back(std::move(s));
  }

  if (kept.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
      if (results[i].ig > results[best].ig) best = i;
    std::ostringstream msg;
    msg << "no candidate reached information gain threshold " << cfg.quality_threshold;
    if (!refs.empty()) {
      const CandidateRef& ref = refs[best];
      msg << ": best was " << results[best].ig << " from '" << data[ref.entry].series.id()
          << "' offset " << ref.offset << " length " << ref.length << " (" << refs.size()
          << " candidates)";
    }
    throw EmptyResult(msg.str());
  }

  std::sort(kept.begin(), kept.end(), shapelet_order);
  kept = remove_self_similar(std::move(kept));

  // Per-class cap floor(r / numC); numC * cap <= r makes the overall cap of
  // r implicit.
  const std::size_t per_class = cfg.max_shapelets / data.class_count();
  std::map<ClassLabel, std::size_t> taken;
  ShapeletSet set;
  set.config = cfg;
  for (auto& s : kept) {
    std::size_t& t = taken[s.class_label];
    if (t == per_class) continue;
    ++t;
    set.shapelets.push_back(std::move(s));
  }
  return set;
}

}  // namespace shapelets
