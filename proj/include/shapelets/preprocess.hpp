#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "shapelets/core.hpp"

namespace shapelets {

enum class TrailingWindowPolicy { Drop, Keep };

struct SegmentationSpec {
  double window_seconds = 0.0;
  TrailingWindowPolicy trailing = TrailingWindowPolicy::Drop;
};

// Zero-phase frequency-mask filter: forward real FFT, zero every bin whose
// frequency falls outside [low_hz, high_hz], inverse FFT. Output keeps the
// input's id, rate, and length.
TimeSeries bandpass(const TimeSeries& x, double low_hz, double high_hz);

// Keeps every factor-th sample starting at index 0. No anti-aliasing —
// compose with bandpass first. New rate = old rate / factor.
TimeSeries decimate(const TimeSeries& x, std::size_t factor);

// Consecutive non-overlapping windows of window_seconds * rate samples.
// window_seconds * rate must be a whole number of samples. Segment ids are
// "<parent>#<index>". A trailing partial window is dropped or kept per the
// policy; shorter-than-one-window input with Drop yields an empty sequence.
std::vector<TimeSeries> segment(const TimeSeries& x, const SegmentationSpec& spec);

// Centered moving-window RMS, window truncated at the edges. Returns
// (upper, lower) with lower = -upper; ids get ".upper"/".lower" suffixes.
std::pair<TimeSeries, TimeSeries> rms_envelope(const TimeSeries& x, std::size_t window);

// Splits at zero up-crossings (x[i] < 0 <= x[i+1]); each wave runs from the
// sample after one crossing through the next crossing's negative-side index,
// so it begins with a nonnegative sample preceded by a negative one. The
// partial head and tail are discarded; fewer than two crossings yields an
// empty sequence. Wave ids are "<parent>#<index>".
std::vector<TimeSeries> zero_upcross_waves(const TimeSeries& x);

// Subsamples every class down to the minority-class count, deterministically
// per seed. Surviving entries keep their original order.
LabeledDataset balance_by_downsampling(const LabeledDataset& data, std::uint64_t seed);

}  // namespace shapelets
