#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shapelets/discovery.hpp"
#include "shapelets/forest.hpp"

namespace shapelets::cli {

// Declarative description of a full run, loaded from a JSON config file.
// Flag overrides (--seed, --threads) are applied before anything reads it.
struct PipelineStep {
  std::string op;  // bandpass | decimate | segment | rms_envelope | zero_upcross_waves | balance
  double low_hz = 0.0;
  double high_hz = 0.0;
  std::size_t factor = 1;
  double window_seconds = 0.0;
  std::string trailing = "drop";  // segment: drop | keep
  std::size_t window = 0;
  std::string keep = "upper";  // rms_envelope: upper | lower | both
};

struct PreprocessConfig {
  std::optional<double> sample_rate_hz;
  std::string label = "?";
  std::string input_format = "stream";  // stream | dataset
  std::vector<PipelineStep> steps;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  PreprocessConfig preprocess;
  DiscoveryConfig discovery;
  ForestConfig forest;
  bool discovery_seed_set = false;  // explicit per-section seed in the file
  bool forest_seed_set = false;
};

RunConfig load_run_config(const std::string& path);

// Hash of the run's effective configuration (seed + all sections). Threads
// and file paths are excluded: they may vary without changing any artifact
// byte. Embedded in every artifact for provenance.
std::string config_hash(const RunConfig& cfg);

// Entry point used by main(); args excludes argv[0]. Returns the process
// exit code: 0 ok, 1 unexpected error, 2 validation, 3 empty result,
// 4 format error.
int run(const std::vector<std::string>& args);

}  // namespace shapelets::cli
