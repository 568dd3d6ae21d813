#include <string>
#include <vector>

#include "doctest.h"
#include "shapelets/discovery.hpp"
#include "shapelets/forest.hpp"
#include "shapelets/io.hpp"
#include "shapelets/rng.hpp"
#include "testutil.hpp"

using namespace shapelets;

TEST_CASE("doubles are printed with nine significant digits") {
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(1.0 / 3.0) == "0.333333333");
  CHECK(io::format_double(123456789012.0) == "1.23456789e+11");
  CHECK(io::format_double(-0.000125) == "-0.000125");
}

TEST_CASE("the fingerprint hash matches the published fnv-1a vectors") {
  CHECK(io::fnv1a("") == 14695981039346656037ULL);
  CHECK(io::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(io::fnv1a("foobar") == 0x85944171f73967e8ULL);
  CHECK(io::to_hex(0xaf63dc4c8601ec8cULL) == "af63dc4c8601ec8c");
  CHECK(io::to_hex(1) == "0000000000000001");
}

TEST_CASE("the feature fingerprint depends on ids and their order") {
  const auto a = io::feature_fingerprint({"s1:0:3", "s2:4:5"});
  const auto b = io::feature_fingerprint({"s2:4:5", "s1:0:3"});
  const auto c = io::feature_fingerprint({"s1:0:3", "s2:4:5"});
  CHECK(a.size() == 16);
  CHECK(a == c);
  CHECK(a != b);
}

TEST_CASE("dataset csv round-trips labels, values, and the sample rate") {
  testutil::TempDir tmp("io-dataset");
  LabeledDataset d;
  d.add(TimeSeries({1.5, -2.0, 0.25}, "row0", 20.0), "A");
  d.add(TimeSeries({4.0, 5.0, 6.0, 7.0}, "row1", 20.0), "B");
  io::write_dataset_csv(tmp.file("d.csv"), d, 20.0);

  const auto r = io::read_dataset_csv(tmp.file("d.csv"));
  CHECK(r.labeled);
  CHECK(r.sample_rate_hz == 20.0);
  REQUIRE(r.data.size() == 2);
  CHECK(r.data[0].label == "A");
  CHECK(r.data[0].series.values() == std::vector<double>{1.5, -2.0, 0.25});
  CHECK(r.data[0].series.id() == "row0");
  CHECK(r.data[1].series.size() == 4);
  CHECK(r.data[1].series.id() == "row1");
}

TEST_CASE("question-mark labels mark a dataset as unlabeled") {
  testutil::TempDir tmp("io-unlabeled");
  testutil::spit(tmp.file("d.csv"), "?,1,2,3\n?,4,5,6\n");
  const auto r = io::read_dataset_csv(tmp.file("d.csv"));
  CHECK_FALSE(r.labeled);
  CHECK(r.data.size() == 2);
}

TEST_CASE("a header row is skipped only when asked") {
  testutil::TempDir tmp("io-header");
  testutil::spit(tmp.file("d.csv"), "label,v0,v1,v2\nA,1,2,3\nB,4,5,6\n");
  const auto r = io::read_dataset_csv(tmp.file("d.csv"), true);
  REQUIRE(r.data.size() == 2);
  CHECK(r.data[0].label == "A");
  CHECK_THROWS_AS(io::read_dataset_csv(tmp.file("d.csv"), false), FormatError);
}

TEST_CASE("malformed dataset rows are reported with their line number") {
  testutil::TempDir tmp("io-bad");
  testutil::spit(tmp.file("d.csv"), "A,1,2,3\nB,4,oops,6\n");
  try {
    io::read_dataset_csv(tmp.file("d.csv"));
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("oops") != std::string::npos);
  }

  testutil::spit(tmp.file("short.csv"), "A\n");
  CHECK_THROWS_AS(io::read_dataset_csv(tmp.file("short.csv")), FormatError);
  testutil::spit(tmp.file("empty.csv"), "# only a comment\n");
  CHECK_THROWS_AS(io::read_dataset_csv(tmp.file("empty.csv")), FormatError);
}

TEST_CASE("raw streams carry samples and metadata comments") {
  testutil::TempDir tmp("io-stream");
  testutil::spit(tmp.file("s.txt"), "# id: buoy-7\n# sample_rate_hz: 4\n0.1 0.2\n0.3\n-0.4\n");
  const auto ts = io::read_stream(tmp.file("s.txt"), std::nullopt, "fallback");
  CHECK(ts.id() == "buoy-7");
  CHECK(ts.sample_rate_hz() == 4.0);
  REQUIRE(ts.size() == 4);
  CHECK(ts[3] == -0.4);

  // An explicit override beats the file metadata.
  const auto forced = io::read_stream(tmp.file("s.txt"), 8.0, "fallback");
  CHECK(forced.sample_rate_hz() == 8.0);

  testutil::spit(tmp.file("bare.txt"), "1 2 3\n");
  const auto bare = io::read_stream(tmp.file("bare.txt"), std::nullopt, "fallback");
  CHECK(bare.id() == "fallback");
  CHECK_FALSE(bare.sample_rate_hz().has_value());

  testutil::spit(tmp.file("none.txt"), "# nothing\n");
  CHECK_THROWS_AS(io::read_stream(tmp.file("none.txt"), std::nullopt, "x"), FormatError);
}

TEST_CASE("shapelet sets round-trip through json exactly") {
  testutil::TempDir tmp("io-set");
  Rng rng(81);
  auto data = testutil::random_two_class(rng, 6, 8, 20, 26);
  DiscoveryConfig cfg;
  cfg.min_len = 3;
  cfg.max_len = 6;
  cfg.max_shapelets = 4;
  cfg.quality_threshold = 0.0;
  const auto set = discover(data, cfg);

  io::write_shapelet_set_json(tmp.file("set.json"), set, "cafe0123cafe0123");
  const auto doc = io::read_shapelet_set_json(tmp.file("set.json"));
  CHECK(doc.config_hash == "cafe0123cafe0123");
  CHECK(doc.fingerprint == io::shapelet_fingerprint(set));
  REQUIRE(doc.set.size() == set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    CHECK(doc.set.shapelets[i].id() == set.shapelets[i].id());
    CHECK(doc.set.shapelets[i].values == set.shapelets[i].values);
    CHECK(doc.set.shapelets[i].ig == set.shapelets[i].ig);
    CHECK(doc.set.shapelets[i].split_threshold == set.shapelets[i].split_threshold);
    CHECK(doc.set.shapelets[i].margin == set.shapelets[i].margin);
    CHECK(doc.set.shapelets[i].class_label == set.shapelets[i].class_label);
  }
  CHECK(doc.set.config.min_len == 3);
  CHECK(doc.set.config.length_normalized == set.config.length_normalized);

  // A tampered fingerprint no longer matches the recomputed one.
  auto text = testutil::slurp(tmp.file("set.json"));
  const auto pos = text.find(doc.fingerprint);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 4, "zzzz");
  testutil::spit(tmp.file("bad.json"), text);
  CHECK_THROWS_AS(io::read_shapelet_set_json(tmp.file("bad.json")), FormatError);
}

TEST_CASE("transform csv round-trips dimensions, ids, and formatted values") {
  testutil::TempDir tmp("io-transform");
  TransformMatrix m;
  m.rows = 2;
  m.cols = 2;
  m.values = {0.125, 1.0 / 3.0, 2.5, 1e-12};
  m.labels = {"A", "B"};
  m.shapelet_ids = {"row0:1:3", "row1:0:4"};
  io::write_transform_csv(tmp.file("t.csv"), m, "hash", "fp");

  const auto doc = io::read_transform_csv(tmp.file("t.csv"));
  CHECK(doc.config_hash == "hash");
  CHECK(doc.fingerprint == "fp");
  CHECK(doc.matrix.rows == 2);
  CHECK(doc.matrix.cols == 2);
  CHECK(doc.matrix.labels == m.labels);
  CHECK(doc.matrix.shapelet_ids == m.shapelet_ids);
  for (std::size_t i = 0; i < m.values.size(); ++i)
    CHECK(io::format_double(doc.matrix.values[i]) == io::format_double(m.values[i]));

  // Unlabeled matrices drop the label column entirely.
  TransformMatrix u = m;
  u.labels.clear();
  io::write_transform_csv(tmp.file("u.csv"), u, "hash", "fp");
  const auto udoc = io::read_transform_csv(tmp.file("u.csv"));
  CHECK_FALSE(udoc.matrix.has_labels());
  CHECK(udoc.matrix.cols == 2);
}

TEST_CASE("forest models round-trip through json") {
  testutil::TempDir tmp("io-model");
  Rng rng(82);
  TransformMatrix m;
  m.rows = 20;
  m.cols = 2;
  for (std::size_t i = 0; i < 20; ++i) {
    m.values.push_back(i % 2 == 0 ? 1.0 + rng.unit() : -1.0 - rng.unit());
    m.values.push_back(rng.unit());
    m.labels.push_back(i % 2 == 0 ? "P" : "Q");
  }
  m.shapelet_ids = {"a:0:3", "b:1:4"};
  ForestConfig cfg;
  cfg.n_trees = 7;
  cfg.seed = 3;
  auto model = train_forest(m, cfg);
  model.shapelet_fingerprint = io::feature_fingerprint(m.shapelet_ids);

  io::write_model_json(tmp.file("m.json"), model, "beefbeefbeefbeef");
  const auto doc = io::read_model_json(tmp.file("m.json"));
  CHECK(doc.config_hash == "beefbeefbeefbeef");
  CHECK(doc.model.classes == model.classes);
  CHECK(doc.model.feature_ids == model.feature_ids);
  CHECK(doc.model.shapelet_fingerprint == model.shapelet_fingerprint);
  CHECK(doc.model.config.n_trees == 7);
  CHECK(doc.model.config.seed == 3);
  REQUIRE(doc.model.trees.size() == model.trees.size());
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    REQUIRE(doc.model.trees[t].nodes.size() == model.trees[t].nodes.size());
    for (std::size_t n = 0; n < model.trees[t].nodes.size(); ++n) {
      const auto& x = doc.model.trees[t].nodes[n];
      const auto& y = model.trees[t].nodes[n];
      CHECK(x.feature == y.feature);
      CHECK(x.threshold == y.threshold);
      CHECK(x.left == y.left);
      CHECK(x.right == y.right);
      CHECK(x.counts == y.counts);
    }
  }

  // Round-tripped models predict identically.
  const auto before = predict(model, m);
  const auto after = predict(doc.model, m);
  for (std::size_t i = 0; i < m.rows; ++i) {
    CHECK(before[i].label == after[i].label);
    CHECK(before[i].probabilities == after[i].probabilities);
  }
}

TEST_CASE("prediction and metrics files carry their provenance hashes") {
  testutil::TempDir tmp("io-pred");
  std::vector<Prediction> preds;
  preds.push_back({"A", {0.875, 0.125}});
  preds.push_back({"B", {0.25, 0.75}});
  io::write_predictions_csv(tmp.file("p.csv"), preds, {"A", "B"}, "aaaa");
  const auto text = testutil::slurp(tmp.file("p.csv"));
  CHECK(text.find("config_hash: aaaa") != std::string::npos);
  CHECK(text.find("prob(A)") != std::string::npos);
  CHECK(text.find("0.875") != std::string::npos);

  EvaluationMetrics metrics = metrics_from_confusion({"A", "B"}, {3, 1, 0, 4});
  metrics.probability_bands.assign(10, 0);
  metrics.correct_probability_bands.assign(10, 0);
  metrics.probability_bands[9] = 8;
  metrics.correct_probability_bands[9] = 7;
  io::write_metrics_json(tmp.file("m.json"), metrics, "bbbb");
  const auto mtext = testutil::slurp(tmp.file("m.json"));
  CHECK(mtext.find("\"config_hash\"") != std::string::npos);
  CHECK(mtext.find("\"accuracy\"") != std::string::npos);
  CHECK(mtext.find("\"probability_bands\"") != std::string::npos);
}
