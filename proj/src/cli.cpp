#include "shapelets/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "shapelets/errors.hpp"
#include "shapelets/io.hpp"
#include "shapelets/parallel.hpp"
#include "shapelets/preprocess.hpp"
#include "shapelets/transform.hpp"

namespace shapelets::cli {

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& path, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known) throw FormatError(path, 0, "unknown key '" + it.key() + "' in " + where);
  }
}

PipelineStep parse_step(const json& j, const std::string& path) {
  PipelineStep s;
  s.op = j.at("op").get<std::string>();
  if (s.op == "bandpass") {
    check_keys(j, {"op", "low_hz", "high_hz"}, path, "bandpass step");
    s.low_hz = j.at("low_hz").get<double>();
    s.high_hz = j.at("high_hz").get<double>();
  } else if (s.op == "decimate") {
    check_keys(j, {"op", "factor"}, path, "decimate step");
    s.factor = j.at("factor").get<std::size_t>();
  } else if (s.op == "segment") {
    check_keys(j, {"op", "window_seconds", "trailing"}, path, "segment step");
    s.window_seconds = j.at("window_seconds").get<double>();
    s.trailing = j.value("trailing", "drop");
    if (s.trailing != "drop" && s.trailing != "keep")
      throw FormatError(path, 0, "trailing must be 'drop' or 'keep'");
  } else if (s.op == "rms_envelope") {
    check_keys(j, {"op", "window", "keep"}, path, "rms_envelope step");
    s.window = j.at("window").get<std::size_t>();
    s.keep = j.value("keep", "upper");
    if (s.keep != "upper" && s.keep != "lower" && s.keep != "both")
      throw FormatError(path, 0, "keep must be 'upper', 'lower' or 'both'");
  } else if (s.op == "zero_upcross_waves" || s.op == "balance") {
    check_keys(j, {"op"}, path, s.op + " step");
  } else {
    throw FormatError(path, 0, "unknown pipeline op '" + s.op + "'");
  }
  return s;
}

NormalizationPolicy policy_from(const std::string& name, const std::string& path) {
  if (name == "znormalize") return NormalizationPolicy::ZNormalize;
  if (name == "none") return NormalizationPolicy::None;
  throw FormatError(path, 0, "unknown normalization policy '" + name + "'");
}

void resolve_seeds(RunConfig& cfg) {
  if (!cfg.discovery_seed_set) cfg.discovery.seed = cfg.seed;
  if (!cfg.forest_seed_set) cfg.forest.seed = cfg.seed;
}

json step_json(const PipelineStep& s) {
  json j{{"op", s.op}};
  if (s.op == "bandpass") {
    j["low_hz"] = s.low_hz;
    j["high_hz"] = s.high_hz;
  } else if (s.op == "decimate") {
    j["factor"] = s.factor;
  } else if (s.op == "segment") {
    j["window_seconds"] = s.window_seconds;
    j["trailing"] = s.trailing;
  } else if (s.op == "rms_envelope") {
    j["window"] = s.window;
    j["keep"] = s.keep;
  }
  return j;
}

json canonical_config(const RunConfig& cfg) {
  json steps = json::array();
  for (const auto& s : cfg.preprocess.steps) steps.push_back(step_json(s));
  const json pp{{"sample_rate_hz", cfg.preprocess.sample_rate_hz
                                       ? json(*cfg.preprocess.sample_rate_hz)
                                       : json(nullptr)},
                {"label", cfg.preprocess.label},
                {"input_format", cfg.preprocess.input_format},
                {"steps", std::move(steps)}};
  const json disc{{"min_len", cfg.discovery.min_len},
                  {"max_len", cfg.discovery.max_len},
                  {"max_shapelets", cfg.discovery.max_shapelets},
                  {"quality_threshold", cfg.discovery.quality_threshold},
                  {"length_step", cfg.discovery.length_step},
                  {"position_stride", cfg.discovery.position_stride},
                  {"normalization", cfg.discovery.normalization == NormalizationPolicy::ZNormalize
                                        ? "znormalize"
                                        : "none"},
                  {"length_normalized", cfg.discovery.length_normalized},
                  {"seed", cfg.discovery.seed}};
  const json forest{{"n_trees", cfg.forest.n_trees},
                    {"features_per_split", cfg.forest.features_per_split},
                    {"max_depth", cfg.forest.max_depth},
                    {"min_samples_leaf", cfg.forest.min_samples_leaf},
                    {"bootstrap", cfg.forest.bootstrap},
                    {"seed", cfg.forest.seed}};
  return json{{"seed", cfg.seed}, {"preprocess", pp}, {"discovery", disc}, {"forest", forest}};
}

TimeSeries with_rate(const TimeSeries& ts, double rate) {
  return TimeSeries(ts.values(), ts.id(), rate);
}

std::vector<LabeledEntry> apply_step(const PipelineStep& step, std::vector<LabeledEntry> in,
                                     std::uint64_t seed, std::size_t threads) {
  if (step.op == "balance") {
    LabeledDataset d(std::move(in));
    const LabeledDataset balanced = balance_by_downsampling(d, seed);
    return balanced.entries();
  }
  std::vector<std::vector<LabeledEntry>> slots(in.size());
  parallel_for(in.size(), threads, [&](std::size_t i) {
    const LabeledEntry& e = in[i];
    if (step.op == "bandpass") {
      slots[i].push_back({bandpass(e.series, step.low_hz, step.high_hz), e.label});
    } else if (step.op == "decimate") {
      slots[i].push_back({decimate(e.series, step.factor), e.label});
    } else if (step.op == "segment") {
      SegmentationSpec spec;
      spec.window_seconds = step.window_seconds;
      spec.trailing =
          step.trailing == "keep" ? TrailingWindowPolicy::Keep : TrailingWindowPolicy::Drop;
      for (auto& s : segment(e.series, spec)) slots[i].push_back({std::move(s), e.label});
    } else if (step.op == "rms_envelope") {
      auto envelopes = rms_envelope(e.series, step.window);
      if (step.keep == "upper" || step.keep == "both")
        slots[i].push_back({std::move(envelopes.first), e.label});
      if (step.keep == "lower" || step.keep == "both")
        slots[i].push_back({std::move(envelopes.second), e.label});
    } else if (step.op == "zero_upcross_waves") {
      for (auto& w : zero_upcross_waves(e.series)) slots[i].push_back({std::move(w), e.label});
    } else {
      throw InvalidInput("unknown pipeline op '" + step.op + "'");
    }
  });
  std::vector<LabeledEntry> out;
  for (auto& slot : slots)
    for (auto& e : slot) out.push_back(std::move(e));
  return out;
}

void verify_transform_fingerprint(const io::TransformDocument& doc, const std::string& path) {
  if (doc.fingerprint.empty()) return;
  if (doc.fingerprint != io::feature_fingerprint(doc.matrix.shapelet_ids))
    throw FormatError(path, 0, "shapelet_fingerprint does not match the header's shapelet ids");
}

void require_model_match(const ForestModel& model, const TransformMatrix& matrix) {
  const std::string actual = io::feature_fingerprint(matrix.shapelet_ids);
  if (model.shapelet_fingerprint != actual)
    throw ValidationError("feature fingerprint mismatch",
                          {"model was trained on shapelet set " + model.shapelet_fingerprint,
                           "input transform was built from shapelet set " + actual});
}

void warn_config_mismatch(const std::string& a, const std::string& b) {
  if (!a.empty() && !b.empty() && a != b)
    std::cerr << "warning: artifacts come from different run configs (" << a << " vs " << b
              << ")\n";
}

int cmd_preprocess(const RunConfig& cfg, const std::string& input, bool header,
                   const std::string& output) {
  std::vector<LabeledEntry> working;
  if (cfg.preprocess.input_format == "stream") {
    TimeSeries ts = io::read_stream(input, cfg.preprocess.sample_rate_hz, "stream");
    working.push_back({std::move(ts), cfg.preprocess.label});
  } else {
    io::DatasetReadResult r = io::read_dataset_csv(input, header);
    if (r.data.size() == 0) throw FormatError(input, 0, "dataset contains no rows");
    for (const auto& e : r.data.entries()) {
      if (cfg.preprocess.sample_rate_hz)
        working.push_back({with_rate(e.series, *cfg.preprocess.sample_rate_hz), e.label});
      else
        working.push_back(e);
    }
  }

  for (const PipelineStep& step : cfg.preprocess.steps)
    working = apply_step(step, std::move(working), cfg.seed, cfg.threads);

  if (working.empty()) std::cerr << "warning: pipeline produced no series\n";
  const std::optional<double> rate =
      working.empty() ? std::nullopt : working.front().series.sample_rate_hz();
  LabeledDataset out(std::move(working));
  io::write_dataset_csv(output, out, rate);
  std::cout << "wrote " << out.size() << " series to " << output << "\n";
  return 0;
}

int cmd_discover(const RunConfig& cfg, const std::string& input, bool header,
                 const std::string& output) {
  const io::DatasetReadResult r = io::read_dataset_csv(input, header);
  if (!r.labeled)
    throw ValidationError("dataset is unlabeled",
                          {"discovery requires class labels; found '?' placeholders"});
  const ShapeletSet set = discover(r.data, cfg.discovery, cfg.threads);
  io::write_shapelet_set_json(output, set, config_hash(cfg));
  std::cout << "discovered " << set.size() << " shapelets from " << r.data.size()
            << " series\n";
  std::cout << "id\tclass\tig\tthreshold\tmargin\n";
  for (const Shapelet& s : set.shapelets)
    std::cout << s.id() << '\t' << s.class_label << '\t' << io::format_double(s.ig) << '\t'
              << io::format_double(s.split_threshold) << '\t' << io::format_double(s.margin)
              << '\n';
  return 0;
}

int cmd_transform(const RunConfig& cfg, const std::string& input, bool header,
                  const std::string& shapelets, const std::string& output) {
  const io::DatasetReadResult r = io::read_dataset_csv(input, header);
  const io::ShapeletSetDocument sdoc = io::read_shapelet_set_json(shapelets);
  std::vector<TimeSeries> series;
  std::vector<ClassLabel> labels;
  for (const auto& e : r.data.entries()) {
    series.push_back(e.series);
    if (r.labeled) labels.push_back(e.label);
  }
  const TransformMatrix m = shapelet_transform(series, labels, sdoc.set, cfg.threads);
  io::write_transform_csv(output, m, config_hash(cfg), sdoc.fingerprint);
  std::cout << "wrote " << m.rows << " x " << m.cols << " transform to " << output << "\n";
  return 0;
}

int cmd_train(const RunConfig& cfg, const std::string& input, const std::string& output) {
  const io::TransformDocument t = io::read_transform_csv(input);
  verify_transform_fingerprint(t, input);
  if (!t.matrix.has_labels())
    throw ValidationError("transform is unlabeled", {"training requires a label column"});
  ForestModel model = train_forest(t.matrix, cfg.forest, cfg.threads);
  model.shapelet_fingerprint =
      t.fingerprint.empty() ? io::feature_fingerprint(t.matrix.shapelet_ids) : t.fingerprint;
  io::write_model_json(output, model, config_hash(cfg));
  std::cout << "trained " << model.trees.size() << " trees on " << t.matrix.rows
            << " rows (classes:";
  for (const auto& c : model.classes) std::cout << ' ' << c;
  std::cout << ")\n";
  return 0;
}

int cmd_predict(const RunConfig& cfg, const std::string& input, const std::string& model_path,
                const std::string& shapelets, const std::string& output) {
  const io::TransformDocument t = io::read_transform_csv(input);
  verify_transform_fingerprint(t, input);
  const io::ModelDocument m = io::read_model_json(model_path);
  require_model_match(m.model, t.matrix);
  if (!shapelets.empty()) {
    const io::ShapeletSetDocument sdoc = io::read_shapelet_set_json(shapelets);
    if (sdoc.fingerprint != m.model.shapelet_fingerprint)
      throw ValidationError("feature fingerprint mismatch",
                            {"model was trained on shapelet set " + m.model.shapelet_fingerprint,
                             "--shapelets set is " + sdoc.fingerprint});
  }
  warn_config_mismatch(t.config_hash, m.config_hash);
  const std::vector<Prediction> preds = predict(m.model, t.matrix, cfg.threads);
  io::write_predictions_csv(output, preds, m.model.classes, config_hash(cfg));
  for (std::size_t i = 0; i < preds.size(); ++i) {
    std::cout << "row" << i << ": " << preds[i].label << " (";
    for (std::size_t c = 0; c < m.model.classes.size(); ++c) {
      if (c > 0) std::cout << " and ";
      std::cout << "prob(" << m.model.classes[c]
                << ") = " << std::llround(100.0 * preds[i].probabilities[c]) << "%";
    }
    std::cout << ")\n";
  }
  std::cout << "wrote " << preds.size() << " predictions to " << output << "\n";
  return 0;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& input, const std::string& model_path,
                 const std::string& output) {
  const io::TransformDocument t = io::read_transform_csv(input);
  verify_transform_fingerprint(t, input);
  if (!t.matrix.has_labels())
    throw ValidationError("transform is unlabeled", {"evaluation requires a label column"});
  const io::ModelDocument m = io::read_model_json(model_path);
  require_model_match(m.model, t.matrix);
  warn_config_mismatch(t.config_hash, m.config_hash);

  const EvaluationMetrics metrics = evaluate(m.model, t.matrix, cfg.threads);
  io::write_metrics_json(output, metrics, config_hash(cfg));

  const std::size_t k = metrics.classes.size();
  std::cout << "accuracy " << io::format_double(metrics.accuracy) << "\n";
  for (std::size_t c = 0; c < k; ++c) {
    std::cout << "class " << metrics.classes[c] << ": precision "
              << (metrics.precision[c] ? io::format_double(*metrics.precision[c]) : "NA")
              << ", recall "
              << (metrics.recall[c] ? io::format_double(*metrics.recall[c]) : "NA") << "\n";
  }
  std::cout << "confusion (row = true class):\n";
  for (std::size_t t_i = 0; t_i < k; ++t_i) {
    std::cout << metrics.classes[t_i] << ':';
    for (std::size_t p = 0; p < k; ++p) std::cout << ' ' << metrics.confusion_at(t_i, p);
    std::cout << '\n';
  }
  std::cout << "prediction probability bands:\n";
  for (std::size_t b = 0; b < metrics.probability_bands.size(); ++b) {
    if (metrics.probability_bands[b] == 0) continue;
    std::cout << b * 10 << "%-" << (b + 1) * 10 << "%: " << metrics.probability_bands[b]
              << " predictions (" << metrics.correct_probability_bands[b] << " correct)\n";
  }
  return 0;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  json doc;
  {
    std::ifstream in(path);
    if (!in) throw FormatError(path, 0, "cannot open file");
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw FormatError(path, 0, e.what());
    }
  }
  RunConfig cfg;
  try {
    check_keys(doc, {"version", "seed", "threads", "preprocess", "discovery", "forest"}, path,
               "run config");
    if (doc.value("version", 1) != 1) throw FormatError(path, 0, "unsupported config version");
    cfg.seed = doc.value("seed", std::uint64_t{0});
    cfg.threads = doc.value("threads", std::size_t{1});
    if (doc.contains("preprocess")) {
      const json& pp = doc.at("preprocess");
      check_keys(pp, {"sample_rate_hz", "label", "input_format", "steps"}, path, "preprocess");
      if (pp.contains("sample_rate_hz"))
        cfg.preprocess.sample_rate_hz = pp.at("sample_rate_hz").get<double>();
      cfg.preprocess.label = pp.value("label", "?");
      cfg.preprocess.input_format = pp.value("input_format", "stream");
      if (cfg.preprocess.input_format != "stream" && cfg.preprocess.input_format != "dataset")
        throw FormatError(path, 0, "input_format must be 'stream' or 'dataset'");
      if (pp.contains("steps"))
        for (const json& s : pp.at("steps")) cfg.preprocess.steps.push_back(parse_step(s, path));
    }
    if (doc.contains("discovery")) {
      const json& d = doc.at("discovery");
      check_keys(d,
                 {"min_len", "max_len", "max_shapelets", "quality_threshold", "length_step",
                  "position_stride", "normalization", "length_normalized", "seed"},
                 path, "discovery");
      cfg.discovery.min_len = d.value("min_len", cfg.discovery.min_len);
      cfg.discovery.max_len = d.value("max_len", cfg.discovery.max_len);
      cfg.discovery.max_shapelets = d.value("max_shapelets", cfg.discovery.max_shapelets);
      cfg.discovery.quality_threshold =
          d.value("quality_threshold", cfg.discovery.quality_threshold);
      cfg.discovery.length_step = d.value("length_step", cfg.discovery.length_step);
      cfg.discovery.position_stride = d.value("position_stride", cfg.discovery.position_stride);
      if (d.contains("normalization"))
        cfg.discovery.normalization = policy_from(d.at("normalization").get<std::string>(), path);
      cfg.discovery.length_normalized =
          d.value("length_normalized", cfg.discovery.length_normalized);
      if (d.contains("seed")) {
        cfg.discovery.seed = d.at("seed").get<std::uint64_t>();
        cfg.discovery_seed_set = true;
      }
    }
    if (doc.contains("forest")) {
      const json& f = doc.at("forest");
      check_keys(f,
                 {"n_trees", "features_per_split", "max_depth", "min_samples_leaf", "bootstrap",
                  "seed"},
                 path, "forest");
      cfg.forest.n_trees = f.value("n_trees", cfg.forest.n_trees);
      cfg.forest.features_per_split = f.value("features_per_split", cfg.forest.features_per_split);
      cfg.forest.max_depth = f.value("max_depth", cfg.forest.max_depth);
      cfg.forest.min_samples_leaf = f.value("min_samples_leaf", cfg.forest.min_samples_leaf);
      cfg.forest.bootstrap = f.value("bootstrap", cfg.forest.bootstrap);
      if (f.contains("seed")) {
        cfg.forest.seed = f.at("seed").get<std::uint64_t>();
        cfg.forest_seed_set = true;
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(path, 0, e.what());
  }
  resolve_seeds(cfg);
  return cfg;
}

std::string config_hash(const RunConfig& cfg) {
  return io::to_hex(io::fnv1a(canonical_config(cfg).dump()));
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"shapelet discovery, transform, and classification pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::string input;
  std::string output;
  std::string shapelets_path;
  std::string model_path;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  bool header = false;

  auto add_common = [&](CLI::App* sub, bool with_output = true) {
    sub->add_option("--config", config_path, "run config JSON");
    sub->add_option("--seed", seed, "override the run seed");
    sub->add_option("--threads", threads, "worker threads (0 = hardware)");
    sub->add_option("--input", input, "input file")->required();
    if (with_output) sub->add_option("--output", output, "output file")->required();
  };

  CLI::App* pre = app.add_subcommand("preprocess", "run the signal pipeline on raw input");
  add_common(pre);
  pre->add_flag("--header", header, "input dataset CSV starts with a header row");
  CLI::App* disc = app.add_subcommand("discover", "search a labeled dataset for shapelets");
  add_common(disc);
  disc->add_flag("--header", header, "input dataset CSV starts with a header row");
  CLI::App* trans = app.add_subcommand("transform", "map a dataset into shapelet features");
  add_common(trans);
  trans->add_option("--shapelets", shapelets_path, "shapelet set JSON")->required();
  trans->add_flag("--header", header, "input dataset CSV starts with a header row");
  CLI::App* train = app.add_subcommand("train", "train a random forest on a transform");
  add_common(train);
  CLI::App* predict = app.add_subcommand("predict", "predict labels for a transform");
  add_common(predict);
  predict->add_option("--model", model_path, "forest model JSON")->required();
  predict->add_option("--shapelets", shapelets_path, "shapelet set JSON to cross-check");
  CLI::App* evaluate = app.add_subcommand("evaluate", "score a labeled transform");
  add_common(evaluate);
  evaluate->add_option("--model", model_path, "forest model JSON")->required();

  try {
    try {
      // CLI11's vector overload consumes the arguments in reverse order.
      app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? 0 : 2;
    }

    RunConfig cfg;
    if (!config_path.empty()) cfg = load_run_config(config_path);
    for (const CLI::App* sub : app.get_subcommands()) {
      if (sub->count("--seed") > 0) {
        cfg.seed = seed;
        resolve_seeds(cfg);
      }
      if (sub->count("--threads") > 0) cfg.threads = threads;
    }

    if (app.got_subcommand("preprocess")) return cmd_preprocess(cfg, input, header, output);
    if (app.got_subcommand("discover")) return cmd_discover(cfg, input, header, output);
    if (app.got_subcommand("transform"))
      return cmd_transform(cfg, input, header, shapelets_path, output);
    if (app.got_subcommand("train")) return cmd_train(cfg, input, output);
    if (app.got_subcommand("predict"))
      return cmd_predict(cfg, input, model_path, shapelets_path, output);
    if (app.got_subcommand("evaluate")) return cmd_evaluate(cfg, input, model_path, output);
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const EmptyResult& e) {
    std::cerr << "empty result: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    for (const auto& issue : e.issues()) std::cerr << "  - " << issue << "\n";
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace shapelets::cli
