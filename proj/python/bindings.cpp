#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "shapelets/core.hpp"
#include "shapelets/discovery.hpp"
#include "shapelets/distance.hpp"
#include "shapelets/forest.hpp"
#include "shapelets/preprocess.hpp"
#include "shapelets/quality.hpp"
#include "shapelets/transform.hpp"

namespace py = pybind11;
using namespace shapelets;

namespace {

LabeledDataset make_dataset(const std::vector<std::vector<double>>& series,
                            const std::vector<std::string>& labels) {
  if (series.size() != labels.size())
    throw InvalidInput("series and labels must have the same length");
  LabeledDataset data;
  for (std::size_t i = 0; i < series.size(); ++i)
    data.add(TimeSeries(series[i], "row" + std::to_string(i)), labels[i]);
  return data;
}

std::vector<TimeSeries> make_series(const std::vector<std::vector<double>>& series) {
  std::vector<TimeSeries> out;
  out.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i)
    out.emplace_back(series[i], "row" + std::to_string(i));
  return out;
}

TransformMatrix make_matrix(const std::vector<std::vector<double>>& rows,
                            const std::vector<std::string>& labels) {
  TransformMatrix m;
  m.rows = rows.size();
  m.cols = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != m.cols) throw InvalidInput("ragged feature matrix");
    m.values.insert(m.values.end(), r.begin(), r.end());
  }
  m.labels = labels;
  for (std::size_t c = 0; c < m.cols; ++c) m.shapelet_ids.push_back("f" + std::to_string(c));
  return m;
}

std::vector<std::vector<double>> matrix_rows(const TransformMatrix& m) {
  std::vector<std::vector<double>> rows(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r)
    rows[r].assign(m.row(r).begin(), m.row(r).end());
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Shapelet discovery, transform, and classification engine";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "DatasetValidationError", PyExc_ValueError);
  py::register_exception<EmptyResult>(m, "EmptyResult", PyExc_RuntimeError);

  py::enum_<NormalizationPolicy>(m, "NormalizationPolicy")
      .value("ZNORMALIZE", NormalizationPolicy::ZNormalize)
      .value("NONE", NormalizationPolicy::None);

  py::class_<DiscoveryConfig>(m, "DiscoveryConfig")
      .def(py::init<>())
      .def_readwrite("min_len", &DiscoveryConfig::min_len)
      .def_readwrite("max_len", &DiscoveryConfig::max_len)
      .def_readwrite("max_shapelets", &DiscoveryConfig::max_shapelets)
      .def_readwrite("quality_threshold", &DiscoveryConfig::quality_threshold)
      .def_readwrite("length_step", &DiscoveryConfig::length_step)
      .def_readwrite("position_stride", &DiscoveryConfig::position_stride)
      .def_readwrite("normalization", &DiscoveryConfig::normalization)
      .def_readwrite("length_normalized", &DiscoveryConfig::length_normalized)
      .def_readwrite("seed", &DiscoveryConfig::seed);

  py::class_<Shapelet>(m, "Shapelet")
      .def_readonly("values", &Shapelet::values)
      .def_readonly("source_id", &Shapelet::source_id)
      .def_readonly("offset", &Shapelet::offset)
      .def_readonly("length", &Shapelet::length)
      .def_readonly("ig", &Shapelet::ig)
      .def_readonly("split_threshold", &Shapelet::split_threshold)
      .def_readonly("margin", &Shapelet::margin)
      .def_readonly("class_label", &Shapelet::class_label)
      .def_property_readonly("id", &Shapelet::id)
      .def("__repr__", [](const Shapelet& s) {
        return "<Shapelet " + s.id() + " class=" + s.class_label +
               " ig=" + std::to_string(s.ig) + ">";
      });

  py::class_<ShapeletSet>(m, "ShapeletSet")
      .def_readonly("shapelets", &ShapeletSet::shapelets)
      .def_readonly("config", &ShapeletSet::config)
      .def("__len__", &ShapeletSet::size);

  py::class_<ForestConfig>(m, "ForestConfig")
      .def(py::init<>())
      .def_readwrite("n_trees", &ForestConfig::n_trees)
      .def_readwrite("features_per_split", &ForestConfig::features_per_split)
      .def_readwrite("max_depth", &ForestConfig::max_depth)
      .def_readwrite("min_samples_leaf", &ForestConfig::min_samples_leaf)
      .def_readwrite("bootstrap", &ForestConfig::bootstrap)
      .def_readwrite("seed", &ForestConfig::seed);

  py::class_<ForestModel>(m, "ForestModel")
      .def_readonly("classes", &ForestModel::classes)
      .def_readonly("feature_ids", &ForestModel::feature_ids)
      .def_property_readonly("n_trees",
                             [](const ForestModel& f) { return f.trees.size(); });

  m.def("znormalize",
        [](const std::vector<double>& x) { return znormalize(x); },
        py::arg("values"), "Shift to mean 0 and scale to unit population standard deviation");

  m.def(
      "min_subsequence_distance",
      [](const std::vector<double>& shapelet, const std::vector<double>& series,
         NormalizationPolicy policy) {
        const std::vector<double> q =
            policy == NormalizationPolicy::ZNormalize ? znormalize(shapelet) : shapelet;
        const auto r = min_subsequence_distance(q, series, policy);
        return py::make_tuple(r.distance, r.best_offset);
      },
      py::arg("shapelet"), py::arg("series"),
      py::arg("normalization") = NormalizationPolicy::ZNormalize,
      "Minimum sliding-window squared distance; returns (distance, best_offset)");

  m.def("entropy", &entropy, py::arg("class_counts"), "Shannon entropy in bits");

  m.def("information_gain", &information_gain, py::arg("total"), py::arg("left"),
        "Entropy reduction of splitting `total` into `left` and its complement");

  m.def(
      "discover",
      [](const std::vector<std::vector<double>>& series, const std::vector<std::string>& labels,
         const DiscoveryConfig& cfg, std::size_t threads) {
        return discover(make_dataset(series, labels), cfg, threads);
      },
      py::arg("series"), py::arg("labels"), py::arg("config") = DiscoveryConfig{},
      py::arg("threads") = 1, "Search a labeled dataset for the top shapelets");

  m.def(
      "transform",
      [](const std::vector<std::vector<double>>& series, const ShapeletSet& set,
         std::size_t threads) {
        return matrix_rows(shapelet_transform(make_series(series), {}, set, threads));
      },
      py::arg("series"), py::arg("shapelet_set"), py::arg("threads") = 1,
      "Map series into the shapelet-distance feature space (one row per series)");

  m.def(
      "train_forest",
      [](const std::vector<std::vector<double>>& rows, const std::vector<std::string>& labels,
         const ForestConfig& cfg, std::size_t threads) {
        return train_forest(make_matrix(rows, labels), cfg, threads);
      },
      py::arg("features"), py::arg("labels"), py::arg("config") = ForestConfig{},
      py::arg("threads") = 1, "Train a random forest on transform features");

  m.def(
      "predict",
      [](const ForestModel& model, const std::vector<std::vector<double>>& rows) {
        py::list out;
        for (const auto& row : rows) {
          const Prediction p = predict_row(model, row);
          py::dict probs;
          for (std::size_t c = 0; c < model.classes.size(); ++c)
            probs[py::str(model.classes[c])] = p.probabilities[c];
          out.append(py::make_tuple(p.label, probs));
        }
        return out;
      },
      py::arg("model"), py::arg("features"),
      "Per-row (label, {class: probability}) predictions");

  m.def(
      "bandpass",
      [](const std::vector<double>& values, double rate, double low_hz, double high_hz) {
        return bandpass(TimeSeries(values, "x", rate), low_hz, high_hz).values();
      },
      py::arg("values"), py::arg("sample_rate_hz"), py::arg("low_hz"), py::arg("high_hz"),
      "Frequency-mask band-pass filter");

  m.def(
      "decimate",
      [](const std::vector<double>& values, std::size_t factor) {
        return decimate(TimeSeries(values, "x"), factor).values();
      },
      py::arg("values"), py::arg("factor"), "Keep every factor-th sample");

  m.def(
      "segment",
      [](const std::vector<double>& values, double rate, double window_seconds, bool keep_tail) {
        SegmentationSpec spec;
        spec.window_seconds = window_seconds;
        spec.trailing = keep_tail ? TrailingWindowPolicy::Keep : TrailingWindowPolicy::Drop;
        std::vector<std::vector<double>> out;
        for (const auto& s : segment(TimeSeries(values, "x", rate), spec))
          out.push_back(s.values());
        return out;
      },
      py::arg("values"), py::arg("sample_rate_hz"), py::arg("window_seconds"),
      py::arg("keep_tail") = false, "Split into fixed-duration windows");

  m.def(
      "rms_envelope",
      [](const std::vector<double>& values, std::size_t window) {
        const auto r = rms_envelope(TimeSeries(values, "x"), window);
        return py::make_tuple(r.first.values(), r.second.values());
      },
      py::arg("values"), py::arg("window"), "Centered moving-window RMS (upper, lower)");

  m.def(
      "zero_upcross_waves",
      [](const std::vector<double>& values) {
        std::vector<std::vector<double>> out;
        for (const auto& w : zero_upcross_waves(TimeSeries(values, "x")))
          out.push_back(w.values());
        return out;
      },
      py::arg("values"), "Individual waves delimited by zero up-crossings");
}
