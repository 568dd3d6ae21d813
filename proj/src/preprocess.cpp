#include "shapelets/preprocess.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <new>
#include <string>

#include "shapelets/errors.hpp"
#include "shapelets/rng.hpp"

namespace shapelets {

namespace {

// FFTW's planner is not thread-safe; plan creation and destruction are
// serialized. Executing distinct plans concurrently is fine.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

double require_rate(const TimeSeries& x, const char* op) {
  if (!x.sample_rate_hz()) throw InvalidInput(std::string(op) + " requires a sample rate");
  return *x.sample_rate_hz();
}

}  // namespace

TimeSeries bandpass(const TimeSeries& x, double low_hz, double high_hz) {
  const double rate = require_rate(x, "bandpass");
  if (!(0.0 < low_hz && low_hz < high_hz && high_hz < rate / 2.0))
    throw InvalidInput("band must satisfy 0 < low < high < rate/2");

  const std::size_t n = x.size();
  double* buf = fftw_alloc_real(n);
  fftw_complex* freq = fftw_alloc_complex(n / 2 + 1);
  if (buf == nullptr || freq == nullptr) {
    fftw_free(buf);
    fftw_free(freq);
    throw std::bad_alloc();
  }
  fftw_plan fwd;
  fftw_plan bwd;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf, freq, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), freq, buf, FFTW_ESTIMATE);
  }

  std::copy(x.values().begin(), x.values().end(), buf);
  fftw_execute(fwd);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) * rate / static_cast<double>(n);
    if (f < low_hz || f > high_hz) {
      freq[k][0] = 0.0;
      freq[k][1] = 0.0;
    }
  }
  fftw_execute(bwd);

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = buf[i] / static_cast<double>(n);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  fftw_free(buf);
  fftw_free(freq);
  return TimeSeries(std::move(out), x.id(), rate);
}

TimeSeries decimate(const TimeSeries& x, std::size_t factor) {
  if (factor == 0) throw InvalidInput("decimation factor must be positive");
  std::vector<double> out;
  out.reserve((x.size() + factor - 1) / factor);
  for (std::size_t i = 0; i < x.size(); i += factor) out.push_back(x[i]);
  std::optional<double> rate = x.sample_rate_hz();
  if (rate) rate = *rate / static_cast<double>(factor);
  return TimeSeries(std::move(out), x.id(), rate);
}

std::vector<TimeSeries> segment(const TimeSeries& x, const SegmentationSpec& spec) {
  const double rate = require_rate(x, "segment");
  if (spec.window_seconds <= 0.0) throw InvalidInput("window_seconds must be positive");
  const double exact = spec.window_seconds * rate;
  const auto window = static_cast<std::size_t>(std::llround(exact));
  if (window < 1 || std::fabs(exact - static_cast<double>(window)) > 1e-9 * std::max(1.0, exact))
    throw InvalidInput("window_seconds x sample_rate_hz must be a positive whole sample count");

  std::vector<TimeSeries> out;
  const std::size_t m = x.size();
  std::size_t index = 0;
  for (std::size_t start = 0; start + window <= m; start += window, ++index) {
    std::vector<double> v(x.values().begin() + static_cast<std::ptrdiff_t>(start),
                          x.values().begin() + static_cast<std::ptrdiff_t>(start + window));
    out.emplace_back(std::move(v), x.id() + "#" + std::to_string(index), rate);
  }
  const std::size_t tail = m % window;
  if (tail != 0 && spec.trailing == TrailingWindowPolicy::Keep) {
    std::vector<double> v(x.values().end() - static_cast<std::ptrdiff_t>(tail), x.values().end());
    out.emplace_back(std::move(v), x.id() + "#" + std::to_string(index), rate);
  }
  return out;
}

std::pair<TimeSeries, TimeSeries> rms_envelope(const TimeSeries& x, std::size_t window) {
  if (window == 0) throw InvalidInput("envelope window must be positive");
  const std::size_t m = x.size();
  if (window > m) throw InvalidInput("envelope window exceeds the series length");

  std::vector<double> upper(m);
  std::vector<double> lower(m);
  // Ideal span at i is [i - (window-1)/2, same + window); edges truncate it.
  const auto half = static_cast<std::ptrdiff_t>((window - 1) / 2);
  const auto size = static_cast<std::ptrdiff_t>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::ptrdiff_t ideal_begin = static_cast<std::ptrdiff_t>(i) - half;
    const std::ptrdiff_t begin = std::max<std::ptrdiff_t>(0, ideal_begin);
    const std::ptrdiff_t end =
        std::min(size, ideal_begin + static_cast<std::ptrdiff_t>(window));
    double acc = 0.0;
    for (std::ptrdiff_t j = begin; j < end; ++j)
      acc += x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    const double rms = std::sqrt(acc / static_cast<double>(end - begin));
    upper[i] = rms;
    lower[i] = -rms;
  }
  return {TimeSeries(std::move(upper), x.id() + ".upper", x.sample_rate_hz()),
          TimeSeries(std::move(lower), x.id() + ".lower", x.sample_rate_hz())};
}

std::vector<TimeSeries> zero_upcross_waves(const TimeSeries& x) {
  std::vector<TimeSeries> out;
  if (x.size() < 2) return out;
  std::vector<std::size_t> crossings;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (x[i] < 0.0 && x[i + 1] >= 0.0) crossings.push_back(i);
  for (std::size_t t = 0; t + 1 < crossings.size(); ++t) {
    const std::size_t begin = crossings[t] + 1;
    const std::size_t end = crossings[t + 1] + 1;  // inclusive of the crossing's negative side
    std::vector<double> v(x.values().begin() + static_cast<std::ptrdiff_t>(begin),
                          x.values().begin() + static_cast<std::ptrdiff_t>(end));
    out.emplace_back(std::move(v), x.id() + "#" + std::to_string(t), x.sample_rate_hz());
  }
  return out;
}

LabeledDataset balance_by_downsampling(const LabeledDataset& data, std::uint64_t seed) {
  const auto counts = data.class_counts();
  if (counts.size() < 2) throw InvalidInput("balancing requires at least 2 classes");
  std::size_t minority = SIZE_MAX;
  for (const auto& [label, count] : counts) minority = std::min(minority, count);

  std::vector<bool> keep(data.size(), false);
  Rng rng(seed);
  // Classes are visited in sorted label order so the draw sequence is a
  // function of (data, seed) alone.
  for (const auto& [label, count] : counts) {
    std::vector<std::size_t> positions;
    for (std::size_t i = 0; i < data.size(); ++i)
      if (data[i].label == label) positions.push_back(i);
    if (count == minority) {
      for (std::size_t p : positions) keep[p] = true;
    } else {
      for (std::size_t pick : rng.sample_without_replacement(positions.size(), minority))
        keep[positions[pick]] = true;
    }
  }
  LabeledDataset out;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (keep[i]) out.add(data[i].series, data[i].label);
  return out;
}

}  // namespace shapelets
