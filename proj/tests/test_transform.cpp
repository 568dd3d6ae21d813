#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "shapelets/discovery.hpp"
#include "shapelets/quality.hpp"
#include "shapelets/rng.hpp"
#include "shapelets/transform.hpp"
#include "testutil.hpp"

using namespace shapelets;

namespace {

ShapeletSet hand_set(std::vector<Shapelet> shapelets, NormalizationPolicy policy,
                     bool length_normalized) {
  ShapeletSet set;
  set.shapelets = std::move(shapelets);
  set.config.normalization = policy;
  set.config.length_normalized = length_normalized;
  return set;
}

Shapelet make_shapelet(std::vector<double> raw, const std::string& source, std::size_t offset,
                       NormalizationPolicy policy) {
  Shapelet s;
  s.length = raw.size();
  s.values = policy == NormalizationPolicy::ZNormalize ? znormalize(raw) : std::move(raw);
  s.source_id = source;
  s.offset = offset;
  return s;
}

}  // namespace

TEST_CASE("transform matrix cells are the minimum distances") {
  Rng rng(51);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 3; ++i) rows.push_back(testutil::gaussian_noise(rng, 30));
  const auto set = hand_set(
      {
          make_shapelet(testutil::gaussian_noise(rng, 5), "a", 0, NormalizationPolicy::ZNormalize),
          make_shapelet(testutil::gaussian_noise(rng, 7), "b", 2, NormalizationPolicy::ZNormalize),
      },
      NormalizationPolicy::ZNormalize, false);

  std::vector<TimeSeries> series;
  for (std::size_t i = 0; i < rows.size(); ++i)
    series.emplace_back(rows[i], "row" + std::to_string(i));
  const auto m = shapelet_transform(series, {}, set);

  REQUIRE(m.rows == 3);
  REQUIRE(m.cols == 2);
  CHECK_FALSE(m.has_labels());
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 2; ++c)
      CHECK(m.at(r, c) == oracle::full_scan_min_distance(set.shapelets[c].values, rows[r],
                                                         NormalizationPolicy::ZNormalize));
}

TEST_CASE("length normalization divides each column by its shapelet length") {
  Rng rng(52);
  const auto row = testutil::gaussian_noise(rng, 40);
  const auto raw = testutil::gaussian_noise(rng, 8);
  const auto plain = hand_set({make_shapelet(raw, "a", 0, NormalizationPolicy::ZNormalize)},
                              NormalizationPolicy::ZNormalize, false);
  const auto scaled = hand_set({make_shapelet(raw, "a", 0, NormalizationPolicy::ZNormalize)},
                               NormalizationPolicy::ZNormalize, true);
  const std::vector<TimeSeries> series{TimeSeries(row, "r")};
  CHECK(shapelet_transform(series, {}, scaled).at(0, 0) ==
        shapelet_transform(series, {}, plain).at(0, 0) / 8.0);
}

TEST_CASE("a shapelet scores zero on its own source series") {
  Rng rng(53);
  auto data = testutil::random_two_class(rng, 6, 6, 24, 30);
  DiscoveryConfig cfg;
  cfg.min_len = 4;
  cfg.max_len = 8;
  cfg.max_shapelets = 4;
  cfg.quality_threshold = 0.0;
  const auto set = discover(data, cfg);
  REQUIRE(!set.shapelets.empty());

  const auto m = shapelet_transform(data, set);
  for (std::size_t c = 0; c < set.shapelets.size(); ++c) {
    std::size_t source_row = data.size();
    for (std::size_t i = 0; i < data.size(); ++i)
      if (data[i].series.id() == set.shapelets[c].source_id) source_row = i;
    REQUIRE(source_row < data.size());
    CHECK(m.at(source_row, c) == 0.0);
  }
}

TEST_CASE("an empty shapelet set produces an n by zero matrix") {
  ShapeletSet set;
  const std::vector<TimeSeries> series{TimeSeries({1, 2, 3}, "a"), TimeSeries({4, 5, 6}, "b")};
  const auto m = shapelet_transform(series, {"A", "B"}, set);
  CHECK(m.rows == 2);
  CHECK(m.cols == 0);
  CHECK(m.has_labels());
  CHECK(m.values.empty());
}

TEST_CASE("transform carries labels through when given") {
  const auto set = hand_set({make_shapelet({1, 2, 3}, "a", 0, NormalizationPolicy::ZNormalize)},
                            NormalizationPolicy::ZNormalize, true);
  const std::vector<TimeSeries> series{TimeSeries({1, 2, 3, 4}, "a")};
  const auto m = shapelet_transform(series, {"A"}, set);
  REQUIRE(m.has_labels());
  CHECK(m.labels[0] == "A");
  CHECK(m.shapelet_ids[0] == "a:0:3");
}

TEST_CASE("feature values are invariant to affine changes of the series") {
  Rng rng(54);
  const auto raw = testutil::gaussian_noise(rng, 6);
  const auto set = hand_set({make_shapelet(raw, "a", 0, NormalizationPolicy::ZNormalize)},
                            NormalizationPolicy::ZNormalize, true);
  const auto base = testutil::gaussian_noise(rng, 50);
  std::vector<double> shifted(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) shifted[i] = 0.25 * base[i] + 3.0;
  const std::vector<TimeSeries> series{TimeSeries(base, "x"), TimeSeries(shifted, "y")};
  const auto m = shapelet_transform(series, {}, set);
  CHECK(m.at(1, 0) == doctest::Approx(m.at(0, 0)).epsilon(1e-9));
}

TEST_CASE("transforming rows independently equals transforming them together") {
  Rng rng(55);
  const auto set = hand_set(
      {make_shapelet(testutil::gaussian_noise(rng, 5), "a", 0, NormalizationPolicy::ZNormalize)},
      NormalizationPolicy::ZNormalize, true);
  std::vector<TimeSeries> series;
  for (int i = 0; i < 6; ++i)
    series.emplace_back(testutil::gaussian_noise(rng, 30), "r" + std::to_string(i));
  const auto all = shapelet_transform(series, {}, set, 3);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto one = shapelet_transform({series[i]}, {}, set);
    CHECK(all.at(i, 0) == one.at(0, 0));
  }
}

TEST_CASE("a series shorter than a shapelet is reported by name") {
  const auto set = hand_set(
      {make_shapelet({1, 2, 3, 4, 5}, "long", 0, NormalizationPolicy::ZNormalize)},
      NormalizationPolicy::ZNormalize, true);
  const std::vector<TimeSeries> series{TimeSeries({1, 2, 3}, "shorty")};
  try {
    shapelet_transform(series, {}, set);
    FAIL("expected InvalidInput");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("shorty") != std::string::npos);
    CHECK(std::string(e.what()).find("long:0:5") != std::string::npos);
  }
}

TEST_CASE("splitting a transform column at the stored threshold reproduces the stored gain") {
  Rng rng(56);
  for (int rep = 0; rep < 3; ++rep) {
    auto data = testutil::random_two_class(rng, 8, 10, 24, 30);
    DiscoveryConfig cfg;
    cfg.min_len = 3;
    cfg.max_len = 7;
    cfg.length_step = 2;
    cfg.max_shapelets = 6;
    cfg.quality_threshold = 0.0;
    const auto set = discover(data, cfg);
    const auto m = shapelet_transform(data, set);

    for (std::size_t c = 0; c < set.shapelets.size(); ++c) {
      std::vector<OrderlineEntry> entries;
      for (std::size_t r = 0; r < m.rows; ++r)
        entries.push_back({m.at(r, c), m.labels[r], r});
      const auto split = best_split(Orderline(std::move(entries)));
      CHECK(split.information_gain == set.shapelets[c].ig);
      CHECK(split.split_threshold == set.shapelets[c].split_threshold);
      CHECK(split.margin == set.shapelets[c].margin);
    }
  }
}

TEST_CASE("labels must match the series count") {
  ShapeletSet set;
  const std::vector<TimeSeries> series{TimeSeries({1, 2, 3}, "a")};
  CHECK_THROWS_AS(shapelet_transform(series, {"A", "B"}, set), InvalidInput);
}
