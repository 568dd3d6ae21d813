#include "shapelets/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "shapelets/errors.hpp"

namespace shapelets::io {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(const std::string& field, const std::string& path, std::size_t line) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw FormatError(path, line, "not a number: '" + field + "'");
  return v;
}

// "# key: value" comment; returns false for plain comments.
bool parse_metadata(const std::string& line, std::string& key, std::string& value) {
  std::string::size_type i = 1;
  while (i < line.size() && line[i] == ' ') ++i;
  const auto colon = line.find(':', i);
  if (colon == std::string::npos) return false;
  key = line.substr(i, colon - i);
  std::string::size_type v = colon + 1;
  while (v < line.size() && line[v] == ' ') ++v;
  value = line.substr(v);
  while (!value.empty() && (value.back() == ' ' || value.back() == '\r')) value.pop_back();
  return !key.empty() && !value.empty();
}

void check_field(const std::string& value, const char* what) {
  if (value.find(',') != std::string::npos || value.find('\n') != std::string::npos)
    throw InvalidInput(std::string(what) + " must not contain commas or newlines: '" + value +
                       "'");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError(path, 0, "cannot open for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path, 0, "cannot open file");
  return in;
}

std::string policy_name(NormalizationPolicy p) {
  return p == NormalizationPolicy::ZNormalize ? "znormalize" : "none";
}

NormalizationPolicy policy_from(const std::string& name, const std::string& path) {
  if (name == "znormalize") return NormalizationPolicy::ZNormalize;
  if (name == "none") return NormalizationPolicy::None;
  throw FormatError(path, 0, "unknown normalization policy '" + name + "'");
}

json discovery_config_json(const DiscoveryConfig& cfg) {
  return json{{"min_len", cfg.min_len},
              {"max_len", cfg.max_len},
              {"max_shapelets", cfg.max_shapelets},
              {"quality_threshold", cfg.quality_threshold},
              {"length_step", cfg.length_step},
              {"position_stride", cfg.position_stride},
              {"normalization", policy_name(cfg.normalization)},
              {"length_normalized", cfg.length_normalized},
              {"seed", cfg.seed}};
}

DiscoveryConfig discovery_config_from(const json& j, const std::string& path) {
  DiscoveryConfig cfg;
  cfg.min_len = j.at("min_len").get<std::size_t>();
  cfg.max_len = j.at("max_len").get<std::size_t>();
  cfg.max_shapelets = j.at("max_shapelets").get<std::size_t>();
  cfg.quality_threshold = j.at("quality_threshold").get<double>();
  cfg.length_step = j.at("length_step").get<std::size_t>();
  cfg.position_stride = j.at("position_stride").get<std::size_t>();
  cfg.normalization = policy_from(j.at("normalization").get<std::string>(), path);
  cfg.length_normalized = j.at("length_normalized").get<bool>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

void check_header(const json& j, const char* format, const std::string& path) {
  if (!j.is_object() || j.value("format", "") != format)
    throw FormatError(path, 0, std::string("not a ") + format + " document");
  if (j.value("version", 0) != 1)
    throw FormatError(path, 0, "unsupported version");
}

json tree_node_json(const DecisionTree& tree, std::size_t index) {
  const TreeNode& node = tree.nodes[index];
  if (node.feature < 0) return json{{"leaf", json{{"counts", node.counts}}}};
  return json{{"split", json{{"feature", node.feature},
                             {"threshold", node.threshold},
                             {"left", tree_node_json(tree, static_cast<std::size_t>(node.left))},
                             {"right",
                              tree_node_json(tree, static_cast<std::size_t>(node.right))}}}};
}

std::int32_t tree_node_from(const json& j, DecisionTree& tree, const std::string& path) {
  if (j.contains("leaf")) {
    TreeNode node;
    node.counts = j.at("leaf").at("counts").get<std::vector<std::size_t>>();
    tree.nodes.push_back(std::move(node));
    return static_cast<std::int32_t>(tree.nodes.size() - 1);
  }
  if (!j.contains("split")) throw FormatError(path, 0, "tree node is neither split nor leaf");
  const json& s = j.at("split");
  const auto index = static_cast<std::int32_t>(tree.nodes.size());
  TreeNode node;
  node.feature = s.at("feature").get<std::int32_t>();
  node.threshold = s.at("threshold").get<double>();
  tree.nodes.push_back(std::move(node));
  const std::int32_t left = tree_node_from(s.at("left"), tree, path);
  const std::int32_t right = tree_node_from(s.at("right"), tree, path);
  tree.nodes[static_cast<std::size_t>(index)].left = left;
  tree.nodes[static_cast<std::size_t>(index)].right = right;
  return index;
}

json parse_json_file(const std::string& path) {
  std::ifstream in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path, 0, e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string feature_fingerprint(const std::vector<std::string>& ids) {
  std::string joined;
  for (const auto& id : ids) {
    joined += id;
    joined += '\n';
  }
  return to_hex(fnv1a(joined));
}

std::string shapelet_fingerprint(const ShapeletSet& set) {
  std::vector<std::string> ids;
  ids.reserve(set.size());
  for (const auto& s : set.shapelets) ids.push_back(s.id());
  return feature_fingerprint(ids);
}

DatasetReadResult read_dataset_csv(const std::string& path, bool skip_header) {
  std::ifstream in = open_in(path);
  DatasetReadResult result;
  result.labeled = true;
  std::string line;
  std::size_t line_no = 0;
  std::size_t row = 0;
  bool header_pending = skip_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string key;
      std::string value;
      if (parse_metadata(line, key, value) && key == "sample_rate_hz") {
        const double rate = parse_double(value, path, line_no);
        if (rate <= 0.0) throw FormatError(path, line_no, "sample_rate_hz must be positive");
        result.sample_rate_hz = rate;
      }
      continue;
    }
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() < 2)
      throw FormatError(path, line_no, "expected label,v0,... (needs at least 2 fields)");
    if (fields[0].empty()) throw FormatError(path, line_no, "empty label");
    std::vector<double> values;
    values.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i)
      values.push_back(parse_double(fields[i], path, line_no));
    if (fields[0] == "?") result.labeled = false;
    try {
      result.data.add(TimeSeries(std::move(values), "row" + std::to_string(row),
                                 result.sample_rate_hz),
                      fields[0]);
    } catch (const InvalidInput& e) {
      throw FormatError(path, line_no, e.what());
    }
    ++row;
  }
  if (result.data.size() == 0) throw FormatError(path, line_no, "no data rows");
  return result;
}

void write_dataset_csv(const std::string& path, const LabeledDataset& data,
                       std::optional<double> sample_rate_hz) {
  for (const auto& e : data.entries()) check_field(e.label, "label");
  std::ofstream out = open_out(path);
  out << "# format: dataset v1\n";
  if (sample_rate_hz) out << "# sample_rate_hz: " << format_double(*sample_rate_hz) << "\n";
  for (const auto& e : data.entries()) {
    out << e.label;
    for (const double v : e.series.values()) out << ',' << format_double(v);
    out << '\n';
  }
}

TimeSeries read_stream(const std::string& path, std::optional<double> rate_override,
                       const std::string& fallback_id) {
  std::ifstream in = open_in(path);
  std::vector<double> values;
  std::optional<double> rate = rate_override;
  std::string id = fallback_id;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string key;
      std::string value;
      if (!parse_metadata(line, key, value)) continue;
      if (key == "sample_rate_hz" && !rate_override) {
        const double r = parse_double(value, path, line_no);
        if (r <= 0.0) throw FormatError(path, line_no, "sample_rate_hz must be positive");
        rate = r;
      } else if (key == "id") {
        id = value;
      }
      continue;
    }
    std::istringstream tokens(line);
    std::string token;
    while (tokens >> token) values.push_back(parse_double(token, path, line_no));
  }
  if (values.empty()) throw FormatError(path, 0, "stream contains no samples");
  try {
    return TimeSeries(std::move(values), id, rate);
  } catch (const InvalidInput& e) {
    throw FormatError(path, 0, e.what());
  }
}

void write_shapelet_set_json(const std::string& path, const ShapeletSet& set,
                             const std::string& config_hash) {
  json doc{{"format", "shapelet_set"},
           {"version", 1},
           {"config_hash", config_hash},
           {"fingerprint", shapelet_fingerprint(set)},
           {"config", discovery_config_json(set.config)}};
  json shapelets = json::array();
  for (const auto& s : set.shapelets) {
    shapelets.push_back(json{{"id", s.id()},
                             {"source_id", s.source_id},
                             {"offset", s.offset},
                             {"length", s.length},
                             {"ig", s.ig},
                             {"split_threshold", s.split_threshold},
                             {"margin", s.margin},
                             {"class_label", s.class_label},
                             {"values", s.values}});
  }
  doc["shapelets"] = std::move(shapelets);
  open_out(path) << doc.dump(2) << '\n';
}

ShapeletSetDocument read_shapelet_set_json(const std::string& path) {
  const json doc = parse_json_file(path);
  check_header(doc, "shapelet_set", path);
  ShapeletSetDocument out;
  try {
    out.config_hash = doc.at("config_hash").get<std::string>();
    out.fingerprint = doc.at("fingerprint").get<std::string>();
    out.set.config = discovery_config_from(doc.at("config"), path);
    for (const json& j : doc.at("shapelets")) {
      Shapelet s;
      s.source_id = j.at("source_id").get<std::string>();
      s.offset = j.at("offset").get<std::size_t>();
      s.length = j.at("length").get<std::size_t>();
      s.ig = j.at("ig").get<double>();
      s.split_threshold = j.at("split_threshold").get<double>();
      s.margin = j.at("margin").get<double>();
      s.class_label = j.at("class_label").get<ClassLabel>();
      s.values = j.at("values").get<std::vector<double>>();
      if (s.values.size() != s.length)
        throw FormatError(path, 0, "shapelet '" + s.id() + "' length does not match values");
      out.set.shapelets.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw FormatError(path, 0, e.what());
  }
  if (shapelet_fingerprint(out.set) != out.fingerprint)
    throw FormatError(path, 0, "fingerprint does not match shapelet ids");
  return out;
}

void write_transform_csv(const std::string& path, const TransformMatrix& m,
                         const std::string& config_hash, const std::string& fingerprint) {
  for (const auto& id : m.shapelet_ids) check_field(id, "shapelet id");
  for (const auto& label : m.labels) check_field(label, "label");
  std::ofstream out = open_out(path);
  out << "# format: transform v1\n";
  out << "# config_hash: " << config_hash << "\n";
  out << "# shapelet_fingerprint: " << fingerprint << "\n";
  for (std::size_t c = 0; c < m.cols; ++c) {
    if (c != 0) out << ',';
    out << m.shapelet_ids[c];
  }
  if (m.has_labels()) {
    if (m.cols != 0) out << ',';
    out << "label";
  }
  out << '\n';
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (c != 0) out << ',';
      out << format_double(m.at(r, c));
    }
    if (m.has_labels()) {
      if (m.cols != 0) out << ',';
      out << m.labels[r];
    }
    out << '\n';
  }
}

TransformDocument read_transform_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  TransformDocument doc;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  bool labeled = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string key;
      std::string value;
      if (!parse_metadata(line, key, value)) continue;
      if (key == "config_hash") doc.config_hash = value;
      if (key == "shapelet_fingerprint") doc.fingerprint = value;
      continue;
    }
    std::vector<std::string> fields = split_csv(line);
    if (!header_seen) {
      header_seen = true;
      labeled = !fields.empty() && fields.back() == "label";
      if (labeled) fields.pop_back();
      doc.matrix.shapelet_ids = std::move(fields);
      doc.matrix.cols = doc.matrix.shapelet_ids.size();
      continue;
    }
    const std::size_t expected = doc.matrix.cols + (labeled ? 1 : 0);
    if (fields.size() != expected)
      throw FormatError(path, line_no,
                        "expected " + std::to_string(expected) + " fields, got " +
                            std::to_string(fields.size()));
    for (std::size_t c = 0; c < doc.matrix.cols; ++c)
      doc.matrix.values.push_back(parse_double(fields[c], path, line_no));
    if (labeled) doc.matrix.labels.push_back(fields.back());
    ++doc.matrix.rows;
  }
  if (!header_seen) throw FormatError(path, 0, "missing header row");
  return doc;
}

void write_model_json(const std::string& path, const ForestModel& model,
                      const std::string& config_hash) {
  json trees = json::array();
  for (const DecisionTree& t : model.trees) trees.push_back(tree_node_json(t, 0));
  const json doc{{"format", "forest_model"},
                 {"version", 1},
                 {"config_hash", config_hash},
                 {"shapelet_fingerprint", model.shapelet_fingerprint},
                 {"classes", model.classes},
                 {"feature_ids", model.feature_ids},
                 {"config", json{{"n_trees", model.config.n_trees},
                                 {"features_per_split", model.config.features_per_split},
                                 {"max_depth", model.config.max_depth},
                                 {"min_samples_leaf", model.config.min_samples_leaf},
                                 {"bootstrap", model.config.bootstrap},
                                 {"seed", model.config.seed}}},
                 {"trees", std::move(trees)}};
  open_out(path) << doc.dump(2) << '\n';
}

ModelDocument read_model_json(const std::string& path) {
  const json doc = parse_json_file(path);
  check_header(doc, "forest_model", path);
  ModelDocument out;
  try {
    out.config_hash = doc.at("config_hash").get<std::string>();
    out.model.shapelet_fingerprint = doc.at("shapelet_fingerprint").get<std::string>();
    out.model.classes = doc.at("classes").get<std::vector<ClassLabel>>();
    out.model.feature_ids = doc.at("feature_ids").get<std::vector<std::string>>();
    const json& cfg = doc.at("config");
    out.model.config.n_trees = cfg.at("n_trees").get<std::size_t>();
    out.model.config.features_per_split = cfg.at("features_per_split").get<std::size_t>();
    out.model.config.max_depth = cfg.at("max_depth").get<std::size_t>();
    out.model.config.min_samples_leaf = cfg.at("min_samples_leaf").get<std::size_t>();
    out.model.config.bootstrap = cfg.at("bootstrap").get<bool>();
    out.model.config.seed = cfg.at("seed").get<std::uint64_t>();
    for (const json& t : doc.at("trees")) {
      DecisionTree tree;
      tree_node_from(t, tree, path);
      out.model.trees.push_back(std::move(tree));
    }
  } catch (const json::exception& e) {
    throw FormatError(path, 0, e.what());
  }
  if (out.model.trees.size() != out.model.config.n_trees)
    throw FormatError(path, 0, "tree count does not match config");
  return out;
}

void write_predictions_csv(const std::string& path, const std::vector<Prediction>& predictions,
                           const std::vector<ClassLabel>& classes,
                           const std::string& config_hash) {
  for (const auto& c : classes) check_field(c, "class label");
  std::ofstream out = open_out(path);
  out << "# format: predictions v1\n";
  out << "# config_hash: " << config_hash << "\n";
  out << "row,label";
  for (const auto& c : classes) out << ",prob(" << c << ")";
  out << '\n';
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    out << i << ',' << predictions[i].label;
    for (const double p : predictions[i].probabilities) out << ',' << format_double(p);
    out << '\n';
  }
}

void write_metrics_json(const std::string& path, const EvaluationMetrics& metrics,
                        const std::string& config_hash) {
  const std::size_t k = metrics.classes.size();
  json confusion = json::array();
  for (std::size_t t = 0; t < k; ++t) {
    json row = json::array();
    for (std::size_t p = 0; p < k; ++p) row.push_back(metrics.confusion[t * k + p]);
    confusion.push_back(std::move(row));
  }
  json precision = json::object();
  json recall = json::object();
  for (std::size_t c = 0; c < k; ++c) {
    precision[metrics.classes[c]] =
        metrics.precision[c] ? json(*metrics.precision[c]) : json(nullptr);
    recall[metrics.classes[c]] = metrics.recall[c] ? json(*metrics.recall[c]) : json(nullptr);
  }
  const json doc{{"format", "metrics"},
                 {"version", 1},
                 {"config_hash", config_hash},
                 {"accuracy", metrics.accuracy},
                 {"classes", metrics.classes},
                 {"confusion", std::move(confusion)},
                 {"precision", std::move(precision)},
                 {"recall", std::move(recall)},
                 {"probability_bands", metrics.probability_bands},
                 {"correct_probability_bands", metrics.correct_probability_bands}};
  open_out(path) << doc.dump(2) << '\n';
}

}  // namespace shapelets::io
