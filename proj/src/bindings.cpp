#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "desdd/harness.hpp"

namespace py = pybind11;
using namespace desdd;

namespace {

/// `dataset` picks the base stream, INI text refines it, and the remaining keywords win last.
ExperimentConfig buildConfig(const std::string& configText, const std::optional<std::string>& dataset,
                             const std::optional<std::string>& method, std::optional<std::uint64_t> seed,
                             std::optional<std::size_t> replications, const std::optional<std::string>& out) {
  ExperimentConfig c;
  c.outDir.clear();
  if (dataset) selectDataset(c, *dataset);
  applyConfigText(c, configText);
  if (method) selectMethod(c, *method, "method");
  if (seed) c.seed = *seed;
  if (replications) c.replications = *replications;
  if (out) c.outDir = *out;
  c.validate();
  return c;
}

py::object optionalNumber(double v) { return std::isnan(v) ? py::none() : py::object(py::float_(v)); }

py::dict reportToDict(const DetectionReport& r) {
  py::dict d;
  d["D"] = r.detections;
  d["FD"] = r.falseDetections;
  d["MD"] = r.missedDrifts;
  d["matched"] = r.matched;
  d["ADR"] = r.averageDelay;
  d["matched_at"] = r.matchedAt;
  d["true_drifts"] = r.trueDrifts;
  return d;
}

py::dict summaryToDict(const ExperimentConfig& config, const ExperimentSummary& s) {
  py::list reps;
  for (const auto& rep : s.replications) {
    py::dict r;
    r["index"] = rep.index;
    r["seed"] = rep.seed;
    r["accuracy"] = rep.log.accuracy();
    r["detections"] = rep.log.detections;
    r["detection"] = rep.detection ? py::object(reportToDict(*rep.detection)) : py::none();
    reps.append(r);
  }
  py::dict d;
  d["method"] = config.method;
  d["dataset"] = config.datasetName;
  d["accuracies"] = s.accuracies;
  d["mean_accuracy"] = s.meanAccuracy;
  d["std_accuracy"] = s.stdAccuracy;
  d["has_ground_truth"] = s.hasGroundTruth;
  d["total_D"] = s.totalD;
  d["total_FD"] = s.totalFD;
  d["total_MD"] = s.totalMD;
  d["mean_ADR"] = s.meanADR;
  d["replications"] = reps;
  return d;
}

/// Predict-then-train wrapper around any method over a fixed schema.
class StreamClassifier {
 public:
  StreamClassifier(const std::string& method, std::optional<std::size_t> nFeatures, std::optional<int> nClasses,
                   const std::optional<std::string>& dataset, const std::string& configText, std::uint64_t seed) {
    config_ = buildConfig(configText, dataset, method, seed, std::nullopt, std::nullopt);
    if (nFeatures || nClasses) {
      if (!nFeatures || !nClasses || *nFeatures < 1 || *nClasses < 2)
        throw ConfigError("StreamClassifier: n_features >= 1 and n_classes >= 2 must be given together");
      schema_ = Schema::numericOnly(*nFeatures, *nClasses);
    } else {
      schema_ = makeStream(config_.stream)->schema();
    }
    method_ = makeMethod(config_, schema_, seed);
  }

  py::dict step(const std::vector<double>& features, int label) {
    if (features.size() != schema_.dimension())
      throw ConfigError("StreamClassifier: expected " + std::to_string(schema_.dimension()) + " features, got " +
                        std::to_string(features.size()));
    if (label < 0 || label >= schema_.numClasses())
      throw ConfigError("StreamClassifier: label " + std::to_string(label) + " outside [0, " +
                        std::to_string(schema_.numClasses()) + ")");
    const auto r = method_->process(Instance{features, label, steps_++});
    py::dict d;
    d["predicted"] = r.predicted;
    d["signal"] = std::string(toString(r.signal));
    d["selected_index"] = r.selectedIndex;
    d["selected_lambda"] = optionalNumber(r.selectedLambda);
    return d;
  }

  std::vector<std::uint64_t> driftLog() const { return method_->driftLog(); }
  std::uint64_t steps() const { return steps_; }
  std::size_t numFeatures() const { return schema_.dimension(); }
  int numClasses() const { return schema_.numClasses(); }

 private:
  ExperimentConfig config_;
  Schema schema_;
  std::unique_ptr<StreamMethod> method_;
  std::uint64_t steps_ = 0;
};

py::tuple generate(const std::string& dataset, std::uint64_t seed, std::optional<std::uint64_t> length) {
  ExperimentConfig c;
  selectDataset(c, dataset);
  StreamSpec spec = c.stream;
  spec.seed = seed;
  if (length) {
    spec.length = *length;
    auto& drifts = spec.schedule.driftPositions;
    drifts.erase(std::remove_if(drifts.begin(), drifts.end(), [&](std::uint64_t p) { return p >= *length; }),
                 drifts.end());
    spec.conceptParams.resize(std::min(spec.conceptParams.size(), drifts.size() + 1));
  }
  spec.validate();
  auto stream = makeStream(spec);
  const auto d = stream->schema().dimension();
  std::vector<double> xs;
  std::vector<int> ys;
  while (auto inst = stream->next()) {
    xs.insert(xs.end(), inst->features.begin(), inst->features.end());
    ys.push_back(inst->label);
  }
  py::array_t<double> x({static_cast<py::ssize_t>(ys.size()), static_cast<py::ssize_t>(d)});
  std::copy(xs.begin(), xs.end(), x.mutable_data());
  py::array_t<int> y(static_cast<py::ssize_t>(ys.size()));
  std::copy(ys.begin(), ys.end(), y.mutable_data());
  return py::make_tuple(x, y, spec.schedule.driftPositions);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Diversity-based ensemble selection with drift detection for data streams";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<ConfigError> configError(m, "ConfigError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(configError, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("preset_names", &presetNames);
  m.def("generator_names", &generatorNames);
  m.def("method_names", &methodNames);
  m.def("default_probe_lambdas", &defaultProbeLambdas);

  m.def("generate", &generate, py::arg("dataset"), py::arg("seed") = 1, py::arg("length") = py::none(),
        "Returns (X, y, drift_positions); `length` truncates the stream and drops later drifts.");

  m.def(
      "format_config",
      [](const std::string& config, std::optional<std::string> dataset, std::optional<std::string> method,
         std::optional<std::uint64_t> seed, std::optional<std::size_t> replications) {
        return formatConfig(buildConfig(config, dataset, method, seed, replications, std::nullopt));
      },
      py::arg("config") = "", py::kw_only(), py::arg("dataset") = py::none(), py::arg("method") = py::none(),
      py::arg("seed") = py::none(), py::arg("replications") = py::none());

  m.def(
      "run_experiment",
      [](const std::string& config, std::optional<std::string> dataset, std::optional<std::string> method,
         std::optional<std::uint64_t> seed, std::optional<std::size_t> replications, std::optional<std::string> out) {
        const auto c = buildConfig(config, dataset, method, seed, replications, out);
        ExperimentSummary s;
        {
          py::gil_scoped_release release;
          s = runExperiment(c);
        }
        return summaryToDict(c, s);
      },
      py::arg("config") = "", py::kw_only(), py::arg("dataset") = py::none(), py::arg("method") = py::none(),
      py::arg("seed") = py::none(), py::arg("replications") = py::none(), py::arg("out") = py::none(),
      "Runs an experiment from INI text plus overrides; writes artifacts only when `out` is given.");

  m.def(
      "probe_lambda",
      [](const std::string& config, std::optional<std::vector<double>> lambdas, std::optional<std::string> dataset,
         std::optional<std::uint64_t> seed, std::optional<std::size_t> replications, std::optional<std::string> out) {
        const auto c = buildConfig(config, dataset, std::nullopt, seed, replications, out);
        const auto grid = lambdas ? *lambdas : defaultProbeLambdas();
        ExperimentSummary s;
        {
          py::gil_scoped_release release;
          s = fixedLambdaProbe(c, grid);
        }
        py::dict d = summaryToDict(c, s);
        py::list hist;
        for (const auto& rep : s.replications) {
          py::list buckets;
          for (const auto& b : selectionHistogram(rep.log)) buckets.append(py::make_tuple(b.lambda, b.count));
          hist.append(buckets);
        }
        d["histograms"] = hist;
        return d;
      },
      py::arg("config") = "", py::kw_only(), py::arg("lambdas") = py::none(), py::arg("dataset") = py::none(),
      py::arg("seed") = py::none(), py::arg("replications") = py::none(), py::arg("out") = py::none(),
      "Runs DESDD over a fixed lambda grid; adds per-replication (lambda, count) selection histograms.");

  m.def(
      "score_detections",
      [](const std::vector<std::uint64_t>& detections, const std::vector<std::uint64_t>& trueDrifts,
         std::uint64_t length) { return reportToDict(scoreDetections(detections, trueDrifts, length)); },
      py::arg("detections"), py::arg("true_drifts"), py::arg("length"));

  m.def(
      "poisson_samples",
      [](double lambda, std::size_t n, std::uint64_t seed) {
        Rng rng(seed);
        std::vector<std::uint64_t> out(n);
        for (auto& k : out) k = poissonSample(lambda, rng);
        return out;
      },
      py::arg("lam"), py::arg("n"), py::arg("seed") = 1);

  m.def(
      "ambiguity",
      [](const std::vector<int>& votes, int numClasses) { return ambiguity(votes, majorityVote(votes, numClasses)); },
      py::arg("votes"), py::arg("n_classes"), "Fraction of members disagreeing with the majority vote.");

  py::class_<StreamClassifier>(m, "StreamClassifier")
      .def(py::init<const std::string&, std::optional<std::size_t>, std::optional<int>,
                    const std::optional<std::string>&, const std::string&, std::uint64_t>(),
           py::arg("method") = "desdd", py::kw_only(), py::arg("n_features") = py::none(),
           py::arg("n_classes") = py::none(), py::arg("dataset") = py::none(), py::arg("config") = "",
           py::arg("seed") = 1)
      .def("step", &StreamClassifier::step, py::arg("features"), py::arg("label"),
           "Predicts the label of `features`, then trains on the revealed `label`.")
      .def_property_readonly("drift_log", &StreamClassifier::driftLog)
      .def_property_readonly("steps", &StreamClassifier::steps)
      .def_property_readonly("n_features", &StreamClassifier::numFeatures)
      .def_property_readonly("n_classes", &StreamClassifier::numClasses);
}
