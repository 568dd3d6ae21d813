#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shapelets/errors.hpp"

namespace shapelets {

// Below this population standard deviation a window is treated as flat and
// z-normalizes to all zeros instead of blowing up.
inline constexpr double kStdEpsilon = 1e-8;

enum class NormalizationPolicy { ZNormalize, None };

// An ordered run of finite real samples, optionally tagged with its sampling
// rate. Immutable after construction; the constructor rejects NaN/Inf and
// empty input, so downstream code never re-checks.
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values, std::string id = {},
                      std::optional<double> sample_rate_hz = std::nullopt);

  const std::vector<double>& values() const noexcept { return values_; }
  const std::string& id() const noexcept { return id_; }
  std::optional<double> sample_rate_hz() const noexcept { return sample_rate_hz_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
  std::string id_;
  std::optional<double> sample_rate_hz_;
};

using ClassLabel = std::string;

struct LabeledEntry {
  TimeSeries series;
  ClassLabel label;
};

class LabeledDataset {
 public:
  LabeledDataset() = default;
  explicit LabeledDataset(std::vector<LabeledEntry> entries);

  void add(TimeSeries series, ClassLabel label);

  const std::vector<LabeledEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const LabeledEntry& operator[](std::size_t i) const { return entries_[i]; }

  std::map<ClassLabel, std::size_t> class_counts() const;
  std::size_t class_count() const;
  // Length of the shortest series; 0 for an empty dataset.
  std::size_t min_series_length() const;

 private:
  std::vector<LabeledEntry> entries_;
};

// Shift to mean 0 and scale to unit population standard deviation. Flat
// inputs (sigma <= kStdEpsilon) map to all zeros.
std::vector<double> znormalize(std::span<const double> x);

// In-place variant for hot paths; out must have x.size() elements.
void znormalize_into(std::span<const double> x, std::span<double> out);

struct ValidationReport {
  std::vector<std::string> issues;

  bool ok() const noexcept { return issues.empty(); }
  std::string to_string() const;
};

// Checks the dataset is usable for discovery/training: no empty series,
// every series at least min_len long, at least two classes present.
ValidationReport validate_dataset(const LabeledDataset& d, std::size_t min_len);

}  // namespace shapelets
