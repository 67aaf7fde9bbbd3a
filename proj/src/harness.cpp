#include "desdd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace desdd {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

template <class T>
std::string joinNumbers(const std::vector<T>& items) {
  std::vector<std::string> parts;
  for (const auto& v : items) {
    if constexpr (std::is_floating_point_v<T>)
      parts.push_back(formatNumber(v));
    else
      parts.push_back(std::to_string(v));
  }
  return join(parts, ", ");
}

std::vector<std::string> splitList(std::string_view text, std::string_view seps = ", \t") {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (seps.find(c) != std::string_view::npos) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

/// Typed access to one key, with errors naming "section.key".
class Field {
 public:
  Field(std::string path, std::string value) : path_(std::move(path)), value_(trim(value)) {}

  const std::string& text() const { return value_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(path_ + ": " + what + " (got '" + value_ + "')");
  }

  std::uint64_t asUInt() const {
    if (value_.empty() || value_[0] == '-') fail("expected a non-negative integer");
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(value_, &used);
    } catch (const std::exception&) {
      fail("expected a non-negative integer");
    }
    if (used != value_.size()) fail("expected a non-negative integer");
    return v;
  }

  std::int64_t asInt() const {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(value_, &used);
    } catch (const std::exception&) {
      fail("expected an integer");
    }
    if (used != value_.size()) fail("expected an integer");
    return v;
  }

  double asDouble() const { return parseDouble(value_); }

  bool asBool() const {
    const auto v = lower(value_);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail("expected true or false");
  }

  std::vector<double> asDoubles() const {
    std::vector<double> out;
    for (const auto& item : splitList(value_)) out.push_back(parseDouble(item));
    return out;
  }

  std::vector<std::uint64_t> asUInts() const {
    std::vector<std::uint64_t> out;
    for (const auto& item : splitList(value_)) out.push_back(Field(path_, item).asUInt());
    return out;
  }

  template <class F>
  auto parsed(F&& parse) const {
    try {
      return parse(value_);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(e.what());
    }
  }

 private:
  double parseDouble(const std::string& text) const {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      fail("expected a number");
    }
    if (used != text.size()) fail("expected a number");
    return v;
  }

  std::string path_;
  std::string value_;
};

LearnerKind parseLearnerKind(std::string_view text) {
  if (text == "hoeffding_tree") return LearnerKind::hoeffdingTree;
  if (text == "naive_bayes") return LearnerKind::naiveBayes;
  throw Error("unknown learner (expected hoeffding_tree or naive_bayes)");
}

std::string_view toString(LearnerKind kind) {
  return kind == LearnerKind::hoeffdingTree ? "hoeffding_tree" : "naive_bayes";
}

LeafPrediction parseLeafPrediction(std::string_view text) {
  if (text == "majority_class") return LeafPrediction::majorityClass;
  if (text == "naive_bayes") return LeafPrediction::naiveBayes;
  if (text == "naive_bayes_adaptive") return LeafPrediction::naiveBayesAdaptive;
  throw Error("unknown leaf prediction (expected majority_class, naive_bayes or naive_bayes_adaptive)");
}

std::string_view toString(LeafPrediction p) {
  switch (p) {
    case LeafPrediction::majorityClass: return "majority_class";
    case LeafPrediction::naiveBayes: return "naive_bayes";
    case LeafPrediction::naiveBayesAdaptive: return "naive_bayes_adaptive";
  }
  return "naive_bayes_adaptive";
}

std::string delimiterName(char d) { return d == '\t' ? "tab" : std::string(1, d); }

// "3: a|b|c; 5: x|y"
std::map<int, std::vector<std::string>> parseNominalColumns(const Field& f) {
  std::map<int, std::vector<std::string>> out;
  for (const auto& entry : splitList(f.text(), ";")) {
    const auto colon = entry.find(':');
    if (colon == std::string::npos) f.fail("expected entries of the form column: v1|v2|...");
    int column = 0;
    try {
      column = std::stoi(trim(entry.substr(0, colon)));
    } catch (const std::exception&) {
      f.fail("bad column index");
    }
    std::vector<std::string> values;
    for (const auto& v : splitList(entry.substr(colon + 1), "|")) values.push_back(trim(v));
    if (values.empty()) f.fail("nominal column needs at least one value");
    out[column] = values;
  }
  return out;
}

std::string formatNominalColumns(const std::map<int, std::vector<std::string>>& cols) {
  std::vector<std::string> entries;
  for (const auto& [col, values] : cols) entries.push_back(std::to_string(col) + ": " + join(values, "|"));
  return join(entries, "; ");
}

/// Key order matters inside [dataset]: the base stream must exist before
/// fields override it, and the schedule before the concepts laid over it.
const std::vector<std::string> kDatasetKeys = {
    "name",         "generator",      "length",      "drift_every", "drift_positions", "drift_kind",
    "gradual_width", "noise",         "concept_params", "balance",  "path",            "format",
    "delimiter",    "header",         "label_column", "classes",    "num_classes",     "nominal_columns",
    "true_drifts"};

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"experiment", {"replications", "seed", "out", "batch_size", "record_diversity", "threads"}},
    {"dataset", {kDatasetKeys.begin(), kDatasetKeys.end()}},
    {"method",
     {"name", "population_size", "ensemble_size", "lambda_min", "lambda_max", "fixed_lambdas", "detector", "trigger",
      "lb_ensemble_size", "lb_lambda", "lb_adwin_clock", "ddd_ensemble_size", "ddd_lambda_low", "ddd_lambda_high",
      "ddd_reentry_min_steps"}},
    {"detector",
     {"buffer_capacity", "ddm_min_instances", "ddm_warning", "ddm_drift", "eddm_alpha", "eddm_beta",
      "eddm_min_errors", "eddm_min_instances", "adwin_delta", "adwin_max_buckets", "adwin_min_sub_window",
      "adwin_min_window", "adwin_clock"}},
    {"learner",
     {"kind", "split_confidence", "grace_period", "tie_threshold", "leaf_prediction", "split_points",
      "min_branch_fraction"}},
};

void applyDataset(ExperimentConfig& c, const std::map<std::string, Field>& f) {
  auto has = [&](const char* k) { return f.count(k) > 0; };
  auto get = [&](const char* k) -> const Field& { return f.at(k); };
  StreamSpec& s = c.stream;

  if (has("name")) {
    try {
      selectDataset(c, get("name").text());
    } catch (const Error& e) {
      get("name").fail(e.what());
    }
  }
  if (has("generator")) {
    const auto names = generatorNames();
    const auto& g = get("generator").text();
    if (std::find(names.begin(), names.end(), g) == names.end())
      get("generator").fail("unknown generator (expected " + join(names, ", ") + ")");
    if (g != s.generatorName) {
      selectDataset(c, g);
      c.datasetName.clear();
    }
  }
  const bool lengthChanged = has("length");
  if (lengthChanged) {
    s.length = get("length").asUInt();
    if (s.length == 0) get("length").fail("stream length must be positive");
  }
  bool scheduleChanged = false;
  if (has("drift_every")) {
    const auto block = get("drift_every").asUInt();
    if (block == 0) get("drift_every").fail("must be positive");
    s.schedule.driftPositions.clear();
    for (std::uint64_t p = block; p < s.length; p += block) s.schedule.driftPositions.push_back(p);
    scheduleChanged = true;
  }
  if (has("drift_positions")) {
    s.schedule.driftPositions = get("drift_positions").asUInts();
    scheduleChanged = true;
  }
  if (lengthChanged && !scheduleChanged) {
    auto& pos = s.schedule.driftPositions;
    pos.erase(std::remove_if(pos.begin(), pos.end(), [&](auto p) { return p >= s.length; }), pos.end());
    scheduleChanged = true;
  }
  if (has("drift_kind")) {
    s.schedule.driftKind = get("drift_kind").parsed([](const std::string& v) { return parseDriftKind(v); });
    if (s.schedule.driftKind == DriftKind::abrupt)
      s.schedule.gradualWidth = 0;
    else if (s.schedule.gradualWidth == 0)
      s.schedule.gradualWidth = DriftSchedule::kDefaultGradualWidth;
  }
  if (has("gradual_width")) s.schedule.gradualWidth = get("gradual_width").asUInt();
  if (has("noise")) s.schedule.noiseFraction = get("noise").asDouble();
  if (has("concept_params")) {
    s.conceptParams = get("concept_params").asDoubles();
  } else if (scheduleChanged && s.generatorName != "file") {
    s.conceptParams = defaultConceptParams(s.generatorName, s.schedule.driftPositions.size() + 1);
  }
  if (has("balance")) s.balanceClasses = get("balance").asBool();

  if (has("path")) {
    s.path = get("path").text();
    if (s.generatorName != "file") {
      s.generatorName = "file";
      s.schedule = {};
      s.conceptParams.clear();
      c.datasetName.clear();
    }
    if (s.path.size() >= 5 && lower(s.path.substr(s.path.size() - 5)) == ".arff")
      s.format.kind = FileFormat::Kind::arff;
  }
  if (has("format")) {
    const auto v = lower(get("format").text());
    if (v == "delimited" || v == "csv")
      s.format.kind = FileFormat::Kind::delimited;
    else if (v == "arff")
      s.format.kind = FileFormat::Kind::arff;
    else
      get("format").fail("expected delimited or arff");
  }
  if (has("delimiter")) {
    const auto& v = get("delimiter").text();
    if (v == "tab" || v == "\\t")
      s.format.delimiter = '\t';
    else if (v == "comma" || v == ",")
      s.format.delimiter = ',';
    else if (v.size() == 1)
      s.format.delimiter = v[0];
    else
      get("delimiter").fail("expected a single character, comma or tab");
  }
  if (has("header")) s.format.header = get("header").asBool();
  if (has("label_column")) s.format.labelColumn = static_cast<int>(get("label_column").asInt());
  if (has("classes")) s.format.classes = splitList(get("classes").text(), ", \t|");
  if (has("num_classes")) s.format.numClasses = static_cast<int>(get("num_classes").asUInt());
  if (has("nominal_columns")) s.format.nominalColumns = parseNominalColumns(get("nominal_columns"));
  if (has("true_drifts")) c.fileDrifts = get("true_drifts").asUInts();

  try {
    s.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("dataset: ") + e.what());
  }
}

void applyFields(ExperimentConfig& c, const std::string& section, const std::map<std::string, Field>& f) {
  if (section == "dataset") return applyDataset(c, f);
  for (const auto& [key, field] : f) {
    if (section == "experiment") {
      if (key == "replications") {
        c.replications = field.asUInt();
        if (c.replications < 1) field.fail("at least one replication is required");
      } else if (key == "seed") {
        c.seed = field.asUInt();
      } else if (key == "out") {
        c.outDir = field.text();
      } else if (key == "batch_size") {
        c.batchSize = field.asUInt();
        if (c.batchSize < 1) field.fail("must be at least 1");
      } else if (key == "record_diversity") {
        c.recordDiversity = field.asBool();
      } else if (key == "threads") {
        c.threads = field.asUInt();
      }
    } else if (section == "method") {
      if (key == "name") {
        selectMethod(c, field.text(), "method.name");
      } else if (key == "population_size") {
        c.desdd.populationSize = field.asUInt();
      } else if (key == "ensemble_size") {
        c.desdd.ensembleSize = field.asUInt();
      } else if (key == "lambda_min") {
        c.desdd.lambdaMin = field.asDouble();
      } else if (key == "lambda_max") {
        c.desdd.lambdaMax = field.asDouble();
      } else if (key == "fixed_lambdas") {
        c.desdd.fixedLambdas = field.asDoubles();
      } else if (key == "detector") {
        c.desdd.detector.kind = field.parsed([](const std::string& v) { return parseDetectorKind(v); });
      } else if (key == "trigger") {
        c.desdd.trigger = field.parsed([](const std::string& v) { return parseDriftTrigger(v); });
      } else if (key == "lb_ensemble_size") {
        c.leveragingBagging.ensembleSize = field.asUInt();
      } else if (key == "lb_lambda") {
        c.leveragingBagging.lambda = field.asDouble();
      } else if (key == "lb_adwin_clock") {
        c.leveragingBagging.adwinClock = field.asUInt();
        if (c.leveragingBagging.adwinClock < 1) field.fail("must be at least 1");
      } else if (key == "ddd_ensemble_size") {
        c.ddd.ensembleSize = field.asUInt();
      } else if (key == "ddd_lambda_low") {
        c.ddd.lambdaLow = field.asDouble();
      } else if (key == "ddd_lambda_high") {
        c.ddd.lambdaHigh = field.asDouble();
      } else if (key == "ddd_reentry_min_steps") {
        c.ddd.reentryMinSteps = field.asUInt();
      }
    } else if (section == "detector") {
      auto& d = c.desdd.detector;
      if (key == "buffer_capacity") {
        d.warningBufferCapacity = field.asUInt();
      } else if (key == "ddm_min_instances") {
        d.ddm.minInstances = field.asUInt();
      } else if (key == "ddm_warning") {
        d.ddm.warningLevel = field.asDouble();
      } else if (key == "ddm_drift") {
        d.ddm.driftLevel = field.asDouble();
      } else if (key == "eddm_alpha") {
        d.eddm.warningRatio = field.asDouble();
      } else if (key == "eddm_beta") {
        d.eddm.driftRatio = field.asDouble();
      } else if (key == "eddm_min_errors") {
        d.eddm.minErrors = field.asUInt();
      } else if (key == "eddm_min_instances") {
        d.eddm.minInstances = field.asUInt();
      } else if (key == "adwin_delta") {
        d.adwin.delta = field.asDouble();
      } else if (key == "adwin_max_buckets") {
        d.adwin.maxBuckets = field.asUInt();
      } else if (key == "adwin_min_sub_window") {
        d.adwin.minSubWindow = field.asUInt();
      } else if (key == "adwin_min_window") {
        d.adwin.minWindow = field.asUInt();
      } else if (key == "adwin_clock") {
        d.adwin.clock = field.asUInt();
        if (d.adwin.clock < 1) field.fail("must be at least 1");
      }
    } else if (section == "learner") {
      auto& t = c.learner.tree;
      if (key == "kind") {
        c.learner.kind = field.parsed([](const std::string& v) { return parseLearnerKind(v); });
      } else if (key == "split_confidence") {
        t.splitConfidence = field.asDouble();
      } else if (key == "grace_period") {
        t.gracePeriod = static_cast<std::uint32_t>(field.asUInt());
      } else if (key == "tie_threshold") {
        t.tieThreshold = field.asDouble();
      } else if (key == "leaf_prediction") {
        t.leafPrediction = field.parsed([](const std::string& v) { return parseLeafPrediction(v); });
      } else if (key == "split_points") {
        t.numSplitPoints = static_cast<int>(field.asUInt());
      } else if (key == "min_branch_fraction") {
        t.minBranchFraction = field.asDouble();
      }
    }
  }
}

void syncSubConfigs(ExperimentConfig& c) {
  c.desdd.learner = c.learner;
  c.leveragingBagging.learner = c.learner;
  c.leveragingBagging.adwin = c.desdd.detector.adwin;
  c.ddd.learner = c.learner;
  c.ddd.eddm = c.desdd.detector.eddm;
}

void writeFile(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  body(out);
  out.flush();
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

std::string replicationDir(std::size_t r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "rep_%03zu", r);
  return buf;
}

}  // namespace

std::vector<std::string> methodNames() { return {"desdd", "ddd", "ddm_single", "leveraging_bagging"}; }

void selectDataset(ExperimentConfig& config, std::string_view name) {
  const auto presets = presetNames();
  if (std::find(presets.begin(), presets.end(), name) != presets.end()) {
    config.stream = presetSpec(name, config.stream.seed);
    config.datasetName = std::string(name);
    return;
  }
  const auto gens = generatorNames();
  if (std::find(gens.begin(), gens.end(), name) != gens.end()) {
    StreamSpec s;
    s.generatorName = std::string(name);
    s.seed = config.stream.seed;
    if (name != "file") {
      s.schedule = DriftSchedule::everyBlock(s.length, 1000, DriftKind::abrupt);
      s.conceptParams = defaultConceptParams(name, s.schedule.driftPositions.size() + 1);
    }
    config.stream = s;
    config.datasetName = std::string(name);
    return;
  }
  throw ConfigError("unknown dataset '" + std::string(name) + "' (expected one of " + join(presets, ", ") +
                    " or a generator: " + join(gens, ", ") + ")");
}

void selectMethod(ExperimentConfig& config, std::string_view name, std::string_view keyPath) {
  const auto names = methodNames();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw ConfigError(std::string(keyPath) + ": unknown method '" + std::string(name) + "' (expected " +
                      join(names, ", ") + ")");
  config.method = std::string(name);
}

void applyConfigText(ExperimentConfig& config, std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(section + ": key outside any section");
    const auto known = kKnownKeys.find(section);
    if (known == kKnownKeys.end())
      throw ConfigError(section + ": unknown section (expected experiment, dataset, method, detector, learner)");
    std::map<std::string, Field> fields;
    for (const auto& [key, value] : body) {
      if (!known->second.count(key)) throw ConfigError(section + "." + key + ": unknown key");
      fields.emplace(key, Field(section + "." + key, value.data()));
    }
    applyFields(config, section, fields);
  }
  syncSubConfigs(config);
}

void applyConfigFile(ExperimentConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  applyConfigText(config, buf.str());
}

std::string formatConfig(const ExperimentConfig& c) {
  std::ostringstream o;
  const auto& s = c.stream;
  o << "[experiment]\n"
    << "replications = " << c.replications << "\n"
    << "seed = " << c.seed << "\n"
    << "out = " << c.outDir.string() << "\n"
    << "batch_size = " << c.batchSize << "\n"
    << "record_diversity = " << (c.recordDiversity ? "true" : "false") << "\n"
    << "threads = " << c.threads << "\n\n";

  o << "[dataset]\n";
  if (!c.datasetName.empty()) o << "name = " << c.datasetName << "\n";
  o << "generator = " << s.generatorName << "\n";
  if (s.generatorName == "file") {
    o << "path = " << s.path << "\n"
      << "format = " << (s.format.kind == FileFormat::Kind::arff ? "arff" : "delimited") << "\n"
      << "delimiter = " << delimiterName(s.format.delimiter) << "\n"
      << "header = " << (s.format.header ? "true" : "false") << "\n"
      << "label_column = " << s.format.labelColumn << "\n";
    if (!s.format.classes.empty()) o << "classes = " << join(s.format.classes, ", ") << "\n";
    if (s.format.numClasses > 0) o << "num_classes = " << s.format.numClasses << "\n";
    if (!s.format.nominalColumns.empty())
      o << "nominal_columns = " << formatNominalColumns(s.format.nominalColumns) << "\n";
    if (!c.fileDrifts.empty()) o << "true_drifts = " << joinNumbers(c.fileDrifts) << "\n";
  } else {
    o << "length = " << s.length << "\n"
      << "drift_positions = " << joinNumbers(s.schedule.driftPositions) << "\n"
      << "drift_kind = " << toString(s.schedule.driftKind) << "\n"
      << "gradual_width = " << s.schedule.gradualWidth << "\n"
      << "noise = " << formatNumber(s.schedule.noiseFraction) << "\n"
      << "concept_params = " << joinNumbers(s.conceptParams) << "\n"
      << "balance = " << (s.balanceClasses ? "true" : "false") << "\n";
  }
  o << "\n";

  o << "[method]\n"
    << "name = " << c.method << "\n"
    << "population_size = " << c.desdd.populationSize << "\n"
    << "ensemble_size = " << c.desdd.ensembleSize << "\n"
    << "lambda_min = " << formatNumber(c.desdd.lambdaMin) << "\n"
    << "lambda_max = " << formatNumber(c.desdd.lambdaMax) << "\n";
  if (!c.desdd.fixedLambdas.empty()) o << "fixed_lambdas = " << joinNumbers(c.desdd.fixedLambdas) << "\n";
  o << "detector = " << toString(c.desdd.detector.kind) << "\n"
    << "trigger = " << toString(c.desdd.trigger) << "\n"
    << "lb_ensemble_size = " << c.leveragingBagging.ensembleSize << "\n"
    << "lb_lambda = " << formatNumber(c.leveragingBagging.lambda) << "\n"
    << "lb_adwin_clock = " << c.leveragingBagging.adwinClock << "\n"
    << "ddd_ensemble_size = " << c.ddd.ensembleSize << "\n"
    << "ddd_lambda_low = " << formatNumber(c.ddd.lambdaLow) << "\n"
    << "ddd_lambda_high = " << formatNumber(c.ddd.lambdaHigh) << "\n"
    << "ddd_reentry_min_steps = " << c.ddd.reentryMinSteps << "\n\n";

  const auto& d = c.desdd.detector;
  o << "[detector]\n"
    << "buffer_capacity = " << d.warningBufferCapacity << "\n"
    << "ddm_min_instances = " << d.ddm.minInstances << "\n"
    << "ddm_warning = " << formatNumber(d.ddm.warningLevel) << "\n"
    << "ddm_drift = " << formatNumber(d.ddm.driftLevel) << "\n"
    << "eddm_alpha = " << formatNumber(d.eddm.warningRatio) << "\n"
    << "eddm_beta = " << formatNumber(d.eddm.driftRatio) << "\n"
    << "eddm_min_errors = " << d.eddm.minErrors << "\n"
    << "eddm_min_instances = " << d.eddm.minInstances << "\n"
    << "adwin_delta = " << formatNumber(d.adwin.delta) << "\n"
    << "adwin_max_buckets = " << d.adwin.maxBuckets << "\n"
    << "adwin_min_sub_window = " << d.adwin.minSubWindow << "\n"
    << "adwin_min_window = " << d.adwin.minWindow << "\n"
    << "adwin_clock = " << d.adwin.clock << "\n\n";

  const auto& t = c.learner.tree;
  o << "[learner]\n"
    << "kind = " << toString(c.learner.kind) << "\n"
    << "split_confidence = " << formatNumber(t.splitConfidence) << "\n"
    << "grace_period = " << t.gracePeriod << "\n"
    << "tie_threshold = " << formatNumber(t.tieThreshold) << "\n"
    << "leaf_prediction = " << toString(t.leafPrediction) << "\n"
    << "split_points = " << t.numSplitPoints << "\n"
    << "min_branch_fraction = " << formatNumber(t.minBranchFraction) << "\n";
  return o.str();
}

void ExperimentConfig::validate() const {
  if (replications < 1) throw ConfigError("experiment.replications: at least one replication is required");
  if (batchSize < 1) throw ConfigError("experiment.batch_size: must be at least 1");
  const auto names = methodNames();
  if (std::find(names.begin(), names.end(), method) == names.end())
    throw ConfigError("method.name: unknown method '" + method + "'");
  try {
    stream.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("dataset: ") + e.what());
  }
  try {
    learner.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("learner: ") + e.what());
  }
  try {
    DesddConfig d = desdd;
    d.learner = learner;
    d.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("method: ") + e.what());
  }
  if (leveragingBagging.ensembleSize < 1 || !(leveragingBagging.lambda > 0.0))
    throw ConfigError("method: leveraging bagging needs at least one member and a positive lambda");
  if (ddd.ensembleSize < 1 || !(ddd.lambdaLow > 0.0) || !(ddd.lambdaHigh > 0.0))
    throw ConfigError("method: ddd needs at least one member and positive lambdas");
}

std::optional<std::vector<std::uint64_t>> ExperimentConfig::groundTruth() const {
  if (stream.generatorName != "file") return stream.schedule.driftPositions;
  if (!fileDrifts.empty()) return fileDrifts;
  return std::nullopt;
}

std::uint64_t replicationSeed(std::uint64_t masterSeed, std::size_t replication) {
  return deriveSeed(masterSeed, replication);
}
std::uint64_t streamSeed(std::uint64_t repSeed) { return deriveSeed(repSeed, 1); }
std::uint64_t methodSeed(std::uint64_t repSeed) { return deriveSeed(repSeed, 2); }

std::unique_ptr<StreamMethod> makeMethod(const ExperimentConfig& config, const Schema& schema, std::uint64_t seed) {
  if (config.method == "desdd") {
    DesddConfig d = config.desdd;
    d.learner = config.learner;
    d.seed = seed;
    return std::make_unique<Desdd>(schema, d);
  }
  if (config.method == "ddd") {
    DddConfig d = config.ddd;
    d.learner = config.learner;
    d.eddm = config.desdd.detector.eddm;
    d.seed = seed;
    return std::make_unique<Ddd>(schema, d);
  }
  if (config.method == "ddm_single") {
    return std::make_unique<SingleDdm>(schema, config.learner, config.desdd.detector.ddm,
                                       config.desdd.detector.warningBufferCapacity);
  }
  if (config.method == "leveraging_bagging") {
    LeveragingBaggingConfig l = config.leveragingBagging;
    l.learner = config.learner;
    l.adwin = config.desdd.detector.adwin;
    l.seed = seed;
    return std::make_unique<LeveragingBagging>(schema, l);
  }
  throw ConfigError("method.name: unknown method '" + config.method + "'");
}

ReplicationResult runReplication(const ExperimentConfig& config, std::size_t index) {
  ReplicationResult r;
  r.index = index;
  r.seed = replicationSeed(config.seed, index);
  StreamSpec spec = config.stream;
  spec.seed = streamSeed(r.seed);
  auto stream = makeStream(spec);
  auto method = makeMethod(config, stream->schema(), methodSeed(r.seed));
  r.log = runPrequential(*method, *stream, config.recordDiversity);
  if (const auto truth = config.groundTruth()) {
    std::vector<std::uint64_t> drifts;
    for (auto p : *truth)
      if (p < r.log.steps.size()) drifts.push_back(p);
    r.detection = scoreDetections(r.log.detections, drifts, r.log.steps.size());
  }
  return r;
}

ExperimentSummary runExperiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentSummary summary;
  summary.replications.resize(config.replications);

  const std::size_t threads =
      std::max<std::size_t>(1, config.threads ? config.threads : std::thread::hardware_concurrency());
  for (std::size_t begin = 0; begin < config.replications; begin += threads) {
    const std::size_t end = std::min(config.replications, begin + threads);
    std::vector<std::future<ReplicationResult>> running;
    for (std::size_t r = begin; r < end; ++r)
      running.push_back(std::async(std::launch::async, [&config, r] { return runReplication(config, r); }));
    for (std::size_t r = begin; r < end; ++r) summary.replications[r] = running[r - begin].get();
  }

  const double n = static_cast<double>(config.replications);
  summary.hasGroundTruth = config.groundTruth().has_value();
  for (const auto& rep : summary.replications) {
    summary.accuracies.push_back(rep.log.accuracy());
    summary.meanAccuracy += rep.log.accuracy() / n;
    summary.meanSeconds += rep.log.seconds / n;
    if (rep.detection) {
      summary.totalD += rep.detection->detections;
      summary.totalFD += rep.detection->falseDetections;
      summary.totalMD += rep.detection->missedDrifts;
      summary.meanADR += rep.detection->averageDelay / n;
    } else {
      summary.totalD += rep.log.detections.size();
    }
  }
  if (config.replications > 1) {
    double ss = 0.0;
    for (double a : summary.accuracies) ss += (a - summary.meanAccuracy) * (a - summary.meanAccuracy);
    summary.stdAccuracy = std::sqrt(ss / (n - 1.0));
  }

  if (config.outDir.empty()) return summary;
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.outDir, ec);
  if (ec) throw Error("cannot create output directory '" + config.outDir.string() + "': " + ec.message());

  const std::string na = "NA";
  for (const auto& rep : summary.replications) {
    const fs::path dir = config.outDir / replicationDir(rep.index);
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create '" + dir.string() + "': " + ec.message());
    writeFile(dir / "run_log.csv", [&](std::ostream& o) { writeRunLogCsv(o, rep.log); });
    if (rep.detection) {
      writeFile(dir / "detection_report.csv", [&](std::ostream& o) { writeDetectionReportCsv(o, *rep.detection); });
      writeFile(dir / "drift_matches.csv", [&](std::ostream& o) { writeDriftMatchesCsv(o, *rep.detection); });
    } else {
      writeFile(dir / "detection_report.csv", [&](std::ostream& o) {
        o << "D,FD,MD,matched,ADR\n" << rep.log.detections.size() << ",NA,NA,NA,NA\n";
      });
    }
    writeFile(dir / "batch_accuracies.csv", [&](std::ostream& o) {
      writeBatchAccuraciesCsv(o, batchAccuracies(rep.log, config.batchSize), config.batchSize,
                              rep.log.steps.size());
    });
    writeFile(dir / "selection_histogram.csv",
              [&](std::ostream& o) { writeSelectionHistogramCsv(o, selectionHistogram(rep.log)); });
    if (config.recordDiversity)
      writeFile(dir / "diversity.csv", [&](std::ostream& o) { writeDiversityCsv(o, rep.log); });
  }

  writeFile(config.outDir / "config.ini", [&](std::ostream& o) { o << formatConfig(config); });
  writeFile(config.outDir / "summary.csv", [&](std::ostream& o) {
    o << "replication,seed,accuracy,D,FD,MD,matched,ADR\n";
    for (const auto& rep : summary.replications) {
      o << rep.index << ',' << rep.seed << ',' << formatNumber(rep.log.accuracy()) << ',';
      if (rep.detection) {
        const auto& d = *rep.detection;
        o << d.detections << ',' << d.falseDetections << ',' << d.missedDrifts << ',' << d.matched << ','
          << formatNumber(d.averageDelay) << '\n';
      } else {
        o << rep.log.detections.size() << ",NA,NA,NA,NA\n";
      }
    }
  });
  writeFile(config.outDir / "aggregate.csv", [&](std::ostream& o) {
    o << "method,dataset,replications,mean_accuracy,std_accuracy,total_D,total_FD,total_MD,mean_ADR\n";
    o << config.method << ',' << (config.datasetName.empty() ? config.stream.generatorName : config.datasetName)
      << ',' << config.replications << ',' << formatNumber(summary.meanAccuracy) << ','
      << formatNumber(summary.stdAccuracy) << ',' << summary.totalD << ',';
    if (summary.hasGroundTruth)
      o << summary.totalFD << ',' << summary.totalMD << ',' << formatNumber(summary.meanADR) << '\n';
    else
      o << na << ',' << na << ',' << na << '\n';
  });
  writeFile(config.outDir / "timing.csv", [&](std::ostream& o) {
    o << "replication,seconds\n";
    for (const auto& rep : summary.replications) o << rep.index << ',' << formatNumber(rep.log.seconds) << '\n';
    o << "mean," << formatNumber(summary.meanSeconds) << '\n';
  });
  return summary;
}

std::vector<double> defaultProbeLambdas() { return {0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1, 5, 10, 50, 100}; }

ExperimentSummary fixedLambdaProbe(ExperimentConfig config, const std::vector<double>& lambdas) {
  if (lambdas.empty()) throw ConfigError("method.fixed_lambdas: the lambda list is empty");
  for (double l : lambdas)
    if (!(l > 0.0) || !std::isfinite(l))
      throw ConfigError("method.fixed_lambdas: every lambda must be positive (got " + formatNumber(l) + ")");
  config.method = "desdd";
  config.desdd.fixedLambdas = lambdas;
  config.recordDiversity = true;
  return runExperiment(config);
}

}  // namespace desdd
