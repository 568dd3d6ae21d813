#include "shapelets/core.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace shapelets {

TimeSeries::TimeSeries(std::vector<double> values, std::string id,
                       std::optional<double> sample_rate_hz)
    : values_(std::move(values)), id_(std::move(id)), sample_rate_hz_(sample_rate_hz) {
  if (values_.empty()) throw InvalidInput("time series must contain at least one sample");
  for (double v : values_) {
    if (!std::isfinite(v))
      throw InvalidInput("time series '" + id_ + "' contains a non-finite sample");
  }
  if (sample_rate_hz_ && *sample_rate_hz_ <= 0.0)
    throw InvalidInput("sample rate must be positive");
}

LabeledDataset::LabeledDataset(std::vector<LabeledEntry> entries) {
  for (auto& e : entries) add(std::move(e.series), std::move(e.label));
}

void LabeledDataset::add(TimeSeries series, ClassLabel label) {
  if (label.empty()) throw InvalidInput("class label must be non-empty");
  entries_.push_back({std::move(series), std::move(label)});
}

std::map<ClassLabel, std::size_t> LabeledDataset::class_counts() const {
  std::map<ClassLabel, std::size_t> counts;
  for (const auto& e : entries_) ++counts[e.label];
  return counts;
}

std::size_t LabeledDataset::class_count() const {
  std::set<ClassLabel> labels;
  for (const auto& e : entries_) labels.insert(e.label);
  return labels.size();
}

std::size_t LabeledDataset::min_series_length() const {
  std::size_t m = 0;
  for (const auto& e : entries_) {
    if (m == 0 || e.series.size() < m) m = e.series.size();
  }
  return m;
}

void znormalize_into(std::span<const double> x, std::span<double> out) {
  if (x.empty()) throw InvalidInput("znormalize: empty input");

  // Two passes, summed left to right. This exact order is part of the
  // contract: the sliding-distance kernel and the brute-force oracle must
  // produce bit-identical values.
  double sum = 0.0;
  for (double v : x) sum += v;
  const double mean = sum / static_cast<double>(x.size());

  double sq = 0.0;
  for (double v : x) {
    const double d = v - mean;
    sq += d * d;
  }
  const double sigma = std::sqrt(sq / static_cast<double>(x.size()));

  if (sigma <= kStdEpsilon) {
    for (auto& v : out) v = 0.0;
    return;
  }
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean) / sigma;
}

std::vector<double> znormalize(std::span<const double> x) {
  std::vector<double> out(x.size());
  znormalize_into(x, out);
  return out;
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream os;
  os << "dataset validation failed:";
  for (const auto& issue : issues) os << "\n  - " << issue;
  return os.str();
}

ValidationReport validate_dataset(const LabeledDataset& d, std::size_t min_len) {
  ValidationReport report;
  if (d.size() == 0) {
    report.issues.push_back("dataset is empty");
    return report;
  }
  if (d.class_count() < 2) report.issues.push_back("single-class dataset");
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& e = d[i];
    if (e.series.size() < min_len) {
      std::ostringstream os;
      os << "series '" << e.series.id() << "' (entry " << i << ") has length "
         << e.series.size() << " < minimum " << min_len;
      report.issues.push_back(os.str());
    }
  }
  return report;
}

}  // namespace shapelets
