#include <string>
#include <vector>

#include "doctest.h"
#include "shapelets/cli.hpp"
#include "shapelets/io.hpp"
#include "shapelets/rng.hpp"
#include "testutil.hpp"

using namespace shapelets;

namespace {

int run(std::vector<std::string> args) { return cli::run(args); }

std::string two_class_csv(std::uint64_t seed, std::size_t n, std::size_t len) {
  Rng rng(seed);
  std::string text = "# format: dataset v1\n";
  for (std::size_t i = 0; i < n; ++i) {
    const bool bump = i % 2 == 1;
    std::vector<double> v = testutil::gaussian_noise(rng, len, 0.3);
    if (bump)
      for (std::size_t j = 0; j < 6; ++j) v[6 + j] += 3.0;
    text += bump ? "pulse" : "calm";
    for (double x : v) text += "," + io::format_double(x);
    text += "\n";
  }
  return text;
}

const char* kConfig = R"({
  "version": 1,
  "seed": 11,
  "discovery": {"min_len": 3, "max_len": 6, "max_shapelets": 4, "quality_threshold": 0.2},
  "forest": {"n_trees": 25}
})";

}  // namespace

TEST_CASE("the full pipeline chains discover, transform, train, predict, evaluate") {
  testutil::TempDir tmp("cmd-pipeline");
  testutil::spit(tmp.file("train.csv"), two_class_csv(1, 8, 24));
  testutil::spit(tmp.file("cfg.json"), kConfig);

  CHECK(run({"discover", "--config", tmp.file("cfg.json"), "--input", tmp.file("train.csv"),
             "--output", tmp.file("set.json")}) == 0);
  CHECK(run({"transform", "--config", tmp.file("cfg.json"), "--shapelets", tmp.file("set.json"),
             "--input", tmp.file("train.csv"), "--output", tmp.file("features.csv")}) == 0);
  CHECK(run({"train", "--config", tmp.file("cfg.json"), "--input", tmp.file("features.csv"),
             "--output", tmp.file("model.json")}) == 0);
  CHECK(run({"predict", "--config", tmp.file("cfg.json"), "--model", tmp.file("model.json"),
             "--input", tmp.file("features.csv"), "--output", tmp.file("pred.csv")}) == 0);
  CHECK(run({"evaluate", "--config", tmp.file("cfg.json"), "--model", tmp.file("model.json"),
             "--input", tmp.file("features.csv"), "--output", tmp.file("metrics.json")}) == 0);

  // Artifacts exist and share one config hash.
  const auto set_text = testutil::slurp(tmp.file("set.json"));
  const auto model_text = testutil::slurp(tmp.file("model.json"));
  const auto hash_at = set_text.find("config_hash");
  REQUIRE(hash_at != std::string::npos);
  const auto hash = set_text.substr(hash_at + 15, 16);
  CHECK(model_text.find(hash) != std::string::npos);
  CHECK(testutil::slurp(tmp.file("pred.csv")).find("prob(") != std::string::npos);
  CHECK(testutil::slurp(tmp.file("metrics.json")).find("accuracy") != std::string::npos);
}

TEST_CASE("reruns of one stage are byte-identical") {
  testutil::TempDir tmp("cmd-rerun");
  testutil::spit(tmp.file("train.csv"), two_class_csv(2, 8, 24));
  testutil::spit(tmp.file("cfg.json"), kConfig);

  CHECK(run({"discover", "--config", tmp.file("cfg.json"), "--input", tmp.file("train.csv"),
             "--output", tmp.file("a.json")}) == 0);
  CHECK(run({"discover", "--config", tmp.file("cfg.json"), "--input", tmp.file("train.csv"),
             "--output", tmp.file("b.json")}) == 0);
  CHECK(testutil::slurp(tmp.file("a.json")) == testutil::slurp(tmp.file("b.json")));
}

TEST_CASE("a single-class dataset exits with the validation code") {
  testutil::TempDir tmp("cmd-single");
  testutil::spit(tmp.file("one.csv"), "only,1,2,3,4,5\nonly,5,4,3,2,1\n");
  testutil::spit(tmp.file("cfg.json"), kConfig);
  CHECK(run({"discover", "--config", tmp.file("cfg.json"), "--input", tmp.file("one.csv"),
             "--output", tmp.file("set.json")}) == 2);
}

TEST_CASE("an unreachable quality threshold exits with the empty-result code") {
  testutil::TempDir tmp("cmd-empty");
  testutil::spit(tmp.file("flat.csv"), "A,1,2,3,4,5\nB,1,2,3,4,5\n");
  testutil::spit(tmp.file("cfg.json"), R"({
    "version": 1,
    "discovery": {"min_len": 3, "max_len": 5, "max_shapelets": 2, "quality_threshold": 0.5}
  })");
  CHECK(run({"discover", "--config", tmp.file("cfg.json"), "--input", tmp.file("flat.csv"),
             "--output", tmp.file("set.json")}) == 3);
}

TEST_CASE("malformed inputs exit with the format code") {
  testutil::TempDir tmp("cmd-bad");
  testutil::spit(tmp.file("bad.csv"), "A,1,2,three\n");
  testutil::spit(tmp.file("cfg.json"), kConfig);
  CHECK(run({"discover", "--config", tmp.file("cfg.json"), "--input", tmp.file("bad.csv"),
             "--output", tmp.file("set.json")}) == 4);

  testutil::spit(tmp.file("bad.json"), "{not json");
  testutil::spit(tmp.file("ok.csv"), two_class_csv(3, 6, 20));
  CHECK(run({"discover", "--config", tmp.file("bad.json"), "--input", tmp.file("ok.csv"),
             "--output", tmp.file("set.json")}) == 4);

  testutil::spit(tmp.file("unknown.json"), R"({"version": 1, "discovery": {"min_length": 3}})");
  CHECK(run({"discover", "--config", tmp.file("unknown.json"), "--input", tmp.file("ok.csv"),
             "--output", tmp.file("set.json")}) == 4);
}

TEST_CASE("unknown flags exit with the usage code") {
  testutil::TempDir tmp("cmd-flags");
  CHECK(run({"discover", "--nope"}) == 2);
  CHECK(run({"not-a-command"}) == 2);
  CHECK(run({}) == 2);
  CHECK(run({"--help"}) == 0);
}

TEST_CASE("a header row is consumed only with the flag") {
  testutil::TempDir tmp("cmd-header");
  testutil::spit(tmp.file("h.csv"), "label,v0,v1,v2,v3,v4,v5,v6,v7,v8,v9,v10,v11,v12,v13,"
                                    "v14,v15,v16,v17,v18,v19,v20,v21,v22,v23\n" +
                                        two_class_csv(4, 8, 24));
  testutil::spit(tmp.file("cfg.json"), kConfig);
  CHECK(run({"discover", "--config", tmp.file("cfg.json"), "--header", "--input",
             tmp.file("h.csv"), "--output", tmp.file("set.json")}) == 0);
  CHECK(run({"discover", "--config", tmp.file("cfg.json"), "--input", tmp.file("h.csv"),
             "--output", tmp.file("set2.json")}) == 4);
}

TEST_CASE("prediction refuses features from a foreign shapelet space") {
  testutil::TempDir tmp("cmd-fingerprint");
  testutil::spit(tmp.file("train.csv"), two_class_csv(5, 8, 24));
  testutil::spit(tmp.file("other.csv"), two_class_csv(6, 8, 26));
  testutil::spit(tmp.file("cfg.json"), kConfig);

  CHECK(run({"discover", "--config", tmp.file("cfg.json"), "--input", tmp.file("train.csv"),
             "--output", tmp.file("set.json")}) == 0);
  CHECK(run({"discover", "--config", tmp.file("cfg.json"), "--input", tmp.file("other.csv"),
             "--output", tmp.file("other-set.json")}) == 0);
  CHECK(run({"transform", "--config", tmp.file("cfg.json"), "--shapelets", tmp.file("set.json"),
             "--input", tmp.file("train.csv"), "--output", tmp.file("f.csv")}) == 0);
  CHECK(run({"transform", "--config", tmp.file("cfg.json"), "--shapelets",
             tmp.file("other-set.json"), "--input", tmp.file("other.csv"), "--output",
             tmp.file("g.csv")}) == 0);
  CHECK(run({"train", "--config", tmp.file("cfg.json"), "--input", tmp.file("f.csv"),
             "--output", tmp.file("model.json")}) == 0);

  // The model was trained in f's feature space; g's fingerprint differs.
  CHECK(run({"predict", "--config", tmp.file("cfg.json"), "--model", tmp.file("model.json"),
             "--input", tmp.file("g.csv"), "--output", tmp.file("pred.csv")}) == 2);
}

TEST_CASE("training requires a labeled transform") {
  testutil::TempDir tmp("cmd-unlabeled");
  testutil::spit(tmp.file("train.csv"), two_class_csv(7, 8, 24));
  std::string unlabeled = two_class_csv(7, 8, 24);
  // Strip the labels down to the placeholder.
  std::string stripped;
  size_t start = 0;
  while (start < unlabeled.size()) {
    size_t end = unlabeled.find('\n', start);
    if (end == std::string::npos) end = unlabeled.size();
    std::string row = unlabeled.substr(start, end - start);
    if (!row.empty() && row[0] != '#') {
      const auto comma = row.find(',');
      row = "?" + row.substr(comma);
    }
    stripped += row + "\n";
    start = end + 1;
  }
  testutil::spit(tmp.file("quiet.csv"), stripped);
  testutil::spit(tmp.file("cfg.json"), kConfig);

  CHECK(run({"discover", "--config", tmp.file("cfg.json"), "--input", tmp.file("train.csv"),
             "--output", tmp.file("set.json")}) == 0);
  CHECK(run({"transform", "--config", tmp.file("cfg.json"), "--shapelets", tmp.file("set.json"),
             "--input", tmp.file("quiet.csv"), "--output", tmp.file("f.csv")}) == 0);
  CHECK(run({"train", "--config", tmp.file("cfg.json"), "--input", tmp.file("f.csv"),
             "--output", tmp.file("model.json")}) == 2);
}

TEST_CASE("discovery on unlabeled data is refused") {
  testutil::TempDir tmp("cmd-nolabel");
  testutil::spit(tmp.file("q.csv"), "?,1,2,3,4\n?,4,3,2,1\n");
  testutil::spit(tmp.file("cfg.json"), kConfig);
  CHECK(run({"discover", "--config", tmp.file("cfg.json"), "--input", tmp.file("q.csv"),
             "--output", tmp.file("set.json")}) == 2);
}

TEST_CASE("the preprocess command runs a declarative pipeline") {
  testutil::TempDir tmp("cmd-preprocess");
  std::string stream = "# sample_rate_hz: 100\n";
  const auto v = testutil::sine(3000, 100.0 / 7.0);  // 7 Hz at 100 Hz
  for (double x : v) stream += io::format_double(x) + "\n";
  testutil::spit(tmp.file("raw.txt"), stream);
  testutil::spit(tmp.file("pp.json"), R"({
    "version": 1,
    "preprocess": {
      "label": "sea",
      "steps": [
        {"op": "bandpass", "low_hz": 5, "high_hz": 10},
        {"op": "decimate", "factor": 2},
        {"op": "segment", "window_seconds": 10}
      ]
    }
  })");
  CHECK(run({"preprocess", "--config", tmp.file("pp.json"), "--input", tmp.file("raw.txt"),
             "--output", tmp.file("out.csv")}) == 0);

  const auto r = io::read_dataset_csv(tmp.file("out.csv"));
  CHECK(r.sample_rate_hz == 50.0);
  REQUIRE(r.data.size() == 3);  // 30 s at the decimated rate, 10 s windows
  for (std::size_t i = 0; i < r.data.size(); ++i) {
    CHECK(r.data[i].label == "sea");
    CHECK(r.data[i].series.size() == 500);
  }
}

TEST_CASE("seed and thread flags override the config file") {
  testutil::TempDir tmp("cmd-seed");
  testutil::spit(tmp.file("train.csv"), two_class_csv(8, 8, 24));
  testutil::spit(tmp.file("cfg.json"), kConfig);

  CHECK(run({"discover", "--config", tmp.file("cfg.json"), "--input", tmp.file("train.csv"),
             "--output", tmp.file("f1.json"), "--threads", "4"}) == 0);
  CHECK(run({"discover", "--config", tmp.file("cfg.json"), "--input", tmp.file("train.csv"),
             "--output", tmp.file("f2.json"), "--threads", "1"}) == 0);
  // Thread count is not part of the configuration identity.
  CHECK(testutil::slurp(tmp.file("f1.json")) == testutil::slurp(tmp.file("f2.json")));

  // Changing the seed changes the config hash even when discovery ignores it.
  CHECK(run({"discover", "--config", tmp.file("cfg.json"), "--seed", "99", "--input",
             tmp.file("train.csv"), "--output", tmp.file("f3.json")}) == 0);
  const auto a = testutil::slurp(tmp.file("f1.json"));
  const auto b = testutil::slurp(tmp.file("f3.json"));
  CHECK(a != b);
}
