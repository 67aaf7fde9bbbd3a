#include "desdd/streams.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace desdd {

Schema Schema::numericOnly(std::size_t d, int classes) {
  Schema s;
  for (std::size_t i = 0; i < d; ++i) s.attributes.push_back(Attribute::numeric("x" + std::to_string(i)));
  for (int c = 0; c < classes; ++c) s.classNames.push_back(std::to_string(c));
  return s;
}

std::string_view toString(DriftKind kind) { return kind == DriftKind::abrupt ? "abrupt" : "gradual"; }

DriftKind parseDriftKind(std::string_view text) {
  if (text == "abrupt") return DriftKind::abrupt;
  if (text == "gradual") return DriftKind::gradual;
  throw Error("unknown drift kind '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// DriftSchedule

DriftSchedule DriftSchedule::everyBlock(std::uint64_t length, std::uint64_t block, DriftKind kind,
                                        double noise, std::uint64_t width) {
  if (block == 0) throw Error("drift block size must be positive");
  DriftSchedule s;
  for (std::uint64_t p = block; p < length; p += block) s.driftPositions.push_back(p);
  s.driftKind = kind;
  s.gradualWidth = kind == DriftKind::abrupt ? 0 : width;
  s.noiseFraction = noise;
  return s;
}

void DriftSchedule::validate(std::uint64_t length) const {
  for (std::size_t i = 0; i < driftPositions.size(); ++i) {
    if (i > 0 && driftPositions[i] <= driftPositions[i - 1])
      throw Error("drift positions must be strictly increasing");
    if (driftPositions[i] >= length) throw Error("drift position beyond stream length");
  }
  if ((driftKind == DriftKind::abrupt) != (gradualWidth == 0))
    throw Error("gradual width must be zero exactly when drift is abrupt");
  if (!(noiseFraction >= 0.0 && noiseFraction <= 1.0)) throw Error("noise fraction must lie in [0, 1]");
}

double DriftSchedule::newConceptProbability(std::uint64_t t, std::uint64_t position) const {
  if (driftKind == DriftKind::abrupt || gradualWidth == 0) return t >= position ? 1.0 : 0.0;
  const double x = -4.0 * (static_cast<double>(t) - static_cast<double>(position)) /
                   static_cast<double>(gradualWidth);
  return 1.0 / (1.0 + std::exp(x));
}

// ---------------------------------------------------------------------------
// StreamSpec and presets

void StreamSpec::validate() const {
  const auto names = generatorNames();
  if (std::find(names.begin(), names.end(), generatorName) == names.end())
    throw Error("unknown generator '" + generatorName + "'");
  if (generatorName == "file") {
    if (path.empty()) throw Error("file stream requires a path");
    return;
  }
  schedule.validate(length);
  if (conceptParams.size() != schedule.driftPositions.size() + 1)
    throw Error("expected " + std::to_string(schedule.driftPositions.size() + 1) +
                " concept parameter sets, got " + std::to_string(conceptParams.size()));
}

std::vector<double> defaultConceptParams(std::string_view generator, std::size_t numConcepts) {
  std::vector<double> params;
  params.reserve(numConcepts);
  static constexpr double kSeaThresholds[] = {8.0, 9.0, 7.0, 9.5};
  for (std::size_t k = 0; k < numConcepts; ++k) {
    if (generator == "agrawal")
      params.push_back(static_cast<double>(k % 10 + 1));
    else if (generator == "sea")
      params.push_back(kSeaThresholds[k % 4]);
    else if (generator == "sine1" || generator == "gauss")
      params.push_back(static_cast<double>(k % 2));
    else
      throw Error("unknown generator '" + std::string(generator) + "'");
  }
  return params;
}

std::vector<std::string> generatorNames() { return {"agrawal", "sea", "sine1", "gauss", "file"}; }

std::vector<std::string> presetNames() {
  return {"agrawal_abrupt", "agrawal_abrupt_noise", "agrawal_gradual", "agrawal_gradual_noise",
          "gauss",          "sea_abrupt",           "sea_abrupt_noise", "sea_gradual",
          "sea_gradual_noise", "sine1"};
}

StreamSpec presetSpec(std::string_view name, std::uint64_t seed) {
  constexpr std::uint64_t kLength = 10000;
  constexpr std::uint64_t kBlock = 1000;
  constexpr double kNoise = 0.10;

  StreamSpec spec;
  spec.length = kLength;
  spec.seed = seed;
  std::string_view rest;
  if (name == "sine1") {
    spec.generatorName = "sine1";
    spec.schedule =
        DriftSchedule::everyBlock(kLength, kBlock, DriftKind::gradual, 0.0, DriftSchedule::kSine1GradualWidth);
  } else if (name == "gauss") {
    spec.generatorName = "gauss";
    spec.schedule = DriftSchedule::everyBlock(kLength, kBlock, DriftKind::abrupt, kNoise);
  } else {
    const auto us = name.find('_');
    if (us == std::string_view::npos) throw Error("unknown dataset '" + std::string(name) + "'");
    spec.generatorName = std::string(name.substr(0, us));
    rest = name.substr(us + 1);
    if (spec.generatorName != "agrawal" && spec.generatorName != "sea")
      throw Error("unknown dataset '" + std::string(name) + "'");
    DriftKind kind;
    double noise = 0.0;
    if (rest == "abrupt") {
      kind = DriftKind::abrupt;
    } else if (rest == "gradual") {
      kind = DriftKind::gradual;
    } else if (rest == "abrupt_noise") {
      kind = DriftKind::abrupt;
      noise = kNoise;
    } else if (rest == "gradual_noise") {
      kind = DriftKind::gradual;
      noise = kNoise;
    } else {
      throw Error("unknown dataset '" + std::string(name) + "'");
    }
    spec.schedule = DriftSchedule::everyBlock(kLength, kBlock, kind, noise);
  }
  spec.conceptParams = defaultConceptParams(spec.generatorName, spec.schedule.driftPositions.size() + 1);
  return spec;
}

// ---------------------------------------------------------------------------
// Concept generators

SeaConcepts::SeaConcepts(std::vector<double> thresholds)
    : schema_(Schema::numericOnly(3, 2)), thresholds_(std::move(thresholds)) {
  schema_.attributes = {Attribute::numeric("f1"), Attribute::numeric("f2"), Attribute::numeric("f3")};
}

int SeaConcepts::classify(const std::vector<double>& f, std::size_t conceptId) const {
  return f[0] + f[1] <= thresholds_.at(conceptId) ? 0 : 1;
}

Sample SeaConcepts::sample(Rng& rng, std::size_t conceptId) const {
  Sample s;
  s.features = {rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)};
  s.label = classify(s.features, conceptId);
  return s;
}

namespace {

std::vector<std::string> rangeLabels(int lo, int hi) {
  std::vector<std::string> out;
  for (int v = lo; v <= hi; ++v) out.push_back(std::to_string(v));
  return out;
}

std::vector<bool> toFlags(const std::vector<double>& params) {
  std::vector<bool> flags;
  for (double p : params) flags.push_back(p != 0.0);
  return flags;
}

}  // namespace

// Attribute layout: salary, commission, age, elevel, car, zipcode, hvalue, hyears, loan.
AgrawalConcepts::AgrawalConcepts(std::vector<double> functions) {
  schema_.attributes = {Attribute::numeric("salary"),
                        Attribute::numeric("commission"),
                        Attribute::numeric("age"),
                        Attribute::nominal("elevel", rangeLabels(0, 4)),
                        Attribute::nominal("car", rangeLabels(1, 20)),
                        Attribute::nominal("zipcode", rangeLabels(0, 8)),
                        Attribute::numeric("hvalue"),
                        Attribute::numeric("hyears"),
                        Attribute::numeric("loan")};
  schema_.classNames = {"groupA", "groupB"};
  for (double f : functions) {
    const int id = static_cast<int>(f);
    if (id < 1 || id > 10) throw Error("Agrawal function must be in 1..10");
    functions_.push_back(id);
  }
}

Sample AgrawalConcepts::sample(Rng& rng, std::size_t conceptId) const {
  const double salary = rng.uniform(20000.0, 150000.0);
  const double commission = salary >= 75000.0 ? 0.0 : rng.uniform(10000.0, 75000.0);
  const double age = rng.uniform(20.0, 80.0);
  const auto elevel = static_cast<double>(rng.uniformInt(5));
  const auto car = static_cast<double>(rng.uniformInt(20));
  const auto zipcode = static_cast<double>(rng.uniformInt(9));
  const double hvalue = (9.0 - zipcode) * 100000.0 * (0.5 + rng.uniform());
  const double hyears = rng.uniform(1.0, 30.0);
  const double loan = rng.uniform(0.0, 500000.0);
  Sample s;
  s.features = {salary, commission, age, elevel, car, zipcode, hvalue, hyears, loan};
  s.label = classify(s.features, functions_.at(conceptId));
  return s;
}

int AgrawalConcepts::classify(const std::vector<double>& f, int function) {
  const double salary = f[0], commission = f[1], age = f[2];
  const int elevel = static_cast<int>(f[3]);
  const double hvalue = f[6], hyears = f[7], loan = f[8];
  auto in = [](double v, double lo, double hi) { return lo <= v && v <= hi; };
  switch (function) {
    case 1:
      return (age < 40.0 || age >= 60.0) ? 0 : 1;
    case 2:
      if (age < 40.0) return in(salary, 50000, 100000) ? 0 : 1;
      if (age < 60.0) return in(salary, 75000, 125000) ? 0 : 1;
      return in(salary, 25000, 75000) ? 0 : 1;
    case 3:
      if (age < 40.0) return (elevel == 0 || elevel == 1) ? 0 : 1;
      if (age < 60.0) return (elevel >= 1 && elevel <= 3) ? 0 : 1;
      return (elevel >= 2 && elevel <= 4) ? 0 : 1;
    case 4:
      if (age < 40.0)
        return (elevel == 0 || elevel == 1) ? (in(salary, 25000, 75000) ? 0 : 1)
                                            : (in(salary, 50000, 100000) ? 0 : 1);
      if (age < 60.0)
        return (elevel >= 1 && elevel <= 3) ? (in(salary, 50000, 100000) ? 0 : 1)
                                            : (in(salary, 75000, 125000) ? 0 : 1);
      return (elevel >= 2 && elevel <= 4) ? (in(salary, 50000, 100000) ? 0 : 1)
                                          : (in(salary, 25000, 75000) ? 0 : 1);
    case 5:
      if (age < 40.0)
        return in(salary, 50000, 100000) ? (in(loan, 100000, 300000) ? 0 : 1)
                                         : (in(loan, 200000, 400000) ? 0 : 1);
      if (age < 60.0)
        return in(salary, 75000, 125000) ? (in(loan, 200000, 400000) ? 0 : 1)
                                         : (in(loan, 300000, 500000) ? 0 : 1);
      return in(salary, 25000, 75000) ? (in(loan, 300000, 500000) ? 0 : 1)
                                      : (in(loan, 100000, 300000) ? 0 : 1);
    case 6: {
      const double total = salary + commission;
      if (age < 40.0) return in(total, 50000, 100000) ? 0 : 1;
      if (age < 60.0) return in(total, 75000, 125000) ? 0 : 1;
      return in(total, 25000, 75000) ? 0 : 1;
    }
    case 7:
      return (2.0 * (salary + commission) / 3.0 - loan / 5.0 - 20000.0) > 0.0 ? 0 : 1;
    case 8:
      return (2.0 * (salary + commission) / 3.0 - 5000.0 * elevel - 20000.0) > 0.0 ? 0 : 1;
    case 9:
      return (2.0 * (salary + commission) / 3.0 - 5000.0 * elevel - loan / 5.0 - 10000.0) > 0.0 ? 0 : 1;
    case 10: {
      const double equity = hyears >= 20.0 ? hvalue * (hyears - 20.0) / 10.0 : 0.0;
      return (2.0 * (salary + commission) / 3.0 - 5000.0 * elevel + equity / 5.0 - 10000.0) > 0.0 ? 0 : 1;
    }
    default:
      throw Error("Agrawal function must be in 1..10");
  }
}

Sine1Concepts::Sine1Concepts(std::vector<double> reversed)
    : schema_(Schema::numericOnly(2, 2)), reversed_(toFlags(reversed)) {}

double Sine1Concepts::boundary(double x1) { return std::sin(x1); }

int Sine1Concepts::classify(const std::vector<double>& f, std::size_t conceptId) const {
  const int below = f[1] < boundary(f[0]) ? 1 : 0;
  return reversed_.at(conceptId) ? 1 - below : below;
}

Sample Sine1Concepts::sample(Rng& rng, std::size_t conceptId) const {
  Sample s;
  s.features = {rng.uniform(), rng.uniform()};
  s.label = classify(s.features, conceptId);
  return s;
}

GaussConcepts::GaussConcepts(std::vector<double> reversed)
    : schema_(Schema::numericOnly(2, 2)), reversed_(toFlags(reversed)) {}

Sample GaussConcepts::sample(Rng& rng, std::size_t conceptId) const {
  const int component = static_cast<int>(rng.uniformInt(2));
  Sample s;
  s.features = {rng.normal(kMeans[component][0], 1.0), rng.normal(kMeans[component][1], 1.0)};
  s.label = reversed_.at(conceptId) ? 1 - component : component;
  return s;
}

// ---------------------------------------------------------------------------
// SyntheticStream

namespace {
enum SeedKey : std::uint64_t { kSampleKey = 1, kMixKey = 2, kNoiseKey = 3 };
}

SyntheticStream::SyntheticStream(std::unique_ptr<ConceptGenerator> generator, const StreamSpec& spec)
    : generator_(std::move(generator)),
      schedule_(spec.schedule),
      length_(spec.length),
      balance_(spec.balanceClasses),
      sampleRng_(deriveSeed(spec.seed, kSampleKey)),
      mixRng_(deriveSeed(spec.seed, kMixKey)),
      noiseRng_(deriveSeed(spec.seed, kNoiseKey)) {
  spec.validate();
}

std::size_t SyntheticStream::pickConcept(std::uint64_t t) {
  const auto& pos = schedule_.driftPositions;
  if (schedule_.driftKind == DriftKind::abrupt) {
    return static_cast<std::size_t>(std::upper_bound(pos.begin(), pos.end(), t) - pos.begin());
  }
  // Nested mixing: newest concept first, each with its own sigmoid weight.
  for (std::size_t k = pos.size(); k > 0; --k) {
    if (mixRng_.uniform() < schedule_.newConceptProbability(t, pos[k - 1])) return k;
  }
  return 0;
}

std::optional<Instance> SyntheticStream::next() {
  if (t_ >= length_) return std::nullopt;
  const std::size_t conceptId = pickConcept(t_);
  Sample s = generator_->sample(sampleRng_, conceptId);
  if (balance_) {
    while (s.label != nextBalancedClass_) s = generator_->sample(sampleRng_, conceptId);
    nextBalancedClass_ = (nextBalancedClass_ + 1) % generator_->schema().numClasses();
  }
  lastConcept_ = conceptId;
  lastCleanLabel_ = s.label;

  const int classes = generator_->schema().numClasses();
  int label = s.label;
  if (noiseRng_.uniform() < schedule_.noiseFraction && classes > 1) {
    const auto offset = 1 + static_cast<int>(noiseRng_.uniformInt(static_cast<std::uint64_t>(classes - 1)));
    label = (label + offset) % classes;
  }
  return Instance{std::move(s.features), label, t_++};
}

std::unique_ptr<SyntheticStream> makeAgrawal(const StreamSpec& spec) {
  if (spec.generatorName != "agrawal") throw Error("spec does not name the agrawal generator");
  return std::make_unique<SyntheticStream>(std::make_unique<AgrawalConcepts>(spec.conceptParams), spec);
}

std::unique_ptr<SyntheticStream> makeSEA(const StreamSpec& spec) {
  if (spec.generatorName != "sea") throw Error("spec does not name the sea generator");
  return std::make_unique<SyntheticStream>(std::make_unique<SeaConcepts>(spec.conceptParams), spec);
}

std::unique_ptr<SyntheticStream> makeSine1(const StreamSpec& spec) {
  if (spec.generatorName != "sine1") throw Error("spec does not name the sine1 generator");
  StreamSpec s = spec;
  s.balanceClasses = false;
  return std::make_unique<SyntheticStream>(std::make_unique<Sine1Concepts>(spec.conceptParams), s);
}

std::unique_ptr<SyntheticStream> makeGauss(const StreamSpec& spec) {
  if (spec.generatorName != "gauss") throw Error("spec does not name the gauss generator");
  StreamSpec s = spec;
  s.balanceClasses = false;
  return std::make_unique<SyntheticStream>(std::make_unique<GaussConcepts>(spec.conceptParams), s);
}

// ---------------------------------------------------------------------------
// File readers

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && ((s.front() == '\'' && s.back() == '\'') || (s.front() == '"' && s.back() == '"')))
    return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(unquote(trim(line.substr(start, pos - start))));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> parseNumber(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return v;
}

int lookup(const std::vector<std::string>& dict, const std::string& value) {
  const auto it = std::find(dict.begin(), dict.end(), value);
  return it == dict.end() ? -1 : static_cast<int>(it - dict.begin());
}

std::string where(const std::string& path, std::uint64_t line) {
  return path + ":" + std::to_string(line) + ": ";
}

}  // namespace

DelimitedFileStream::DelimitedFileStream(const std::string& path, FileFormat format)
    : in_(path), path_(path), format_(std::move(format)) {
  if (!in_) throw Error("cannot open '" + path + "'");
  if (format_.classes.empty() && format_.numClasses <= 0)
    throw Error("delimited format needs a class dictionary or a class count");

  std::string line;
  std::vector<std::string> names;
  // The first non-blank line fixes the column count.
  while (std::getline(in_, line)) {
    ++lineNo_;
    if (trim(line).empty()) continue;
    if (format_.header) {
      names = split(line, format_.delimiter);
      numColumns_ = names.size();
    } else {
      numColumns_ = split(line, format_.delimiter).size();
      pending_ = line;
    }
    break;
  }

  if (numColumns_ == 0) {
    // Empty file: a stream with no instances.
    schema_.classNames = format_.classes;
    return;
  }
  const int lc = format_.labelColumn < 0 ? static_cast<int>(numColumns_) + format_.labelColumn : format_.labelColumn;
  if (lc < 0 || lc >= static_cast<int>(numColumns_)) throw Error("label column out of range");
  labelColumn_ = static_cast<std::size_t>(lc);

  for (std::size_t c = 0; c < numColumns_; ++c) {
    if (c == labelColumn_) continue;
    const std::string name = names.empty() ? "x" + std::to_string(c) : names[c];
    const auto nom = format_.nominalColumns.find(static_cast<int>(c));
    if (nom != format_.nominalColumns.end())
      schema_.attributes.push_back(Attribute::nominal(name, nom->second));
    else
      schema_.attributes.push_back(Attribute::numeric(name));
  }
  if (!format_.classes.empty()) {
    schema_.classNames = format_.classes;
  } else {
    for (int k = 0; k < format_.numClasses; ++k) schema_.classNames.push_back(std::to_string(k));
  }
}

Instance DelimitedFileStream::parseRow(const std::vector<std::string>& fields) {
  if (fields.size() != numColumns_)
    throw Error(where(path_, lineNo_) + "expected " + std::to_string(numColumns_) + " fields, got " +
                std::to_string(fields.size()));
  Instance inst;
  inst.features.reserve(numColumns_ - 1);
  std::size_t a = 0;
  for (std::size_t c = 0; c < numColumns_; ++c) {
    const std::string& field = fields[c];
    if (c == labelColumn_) {
      if (!format_.classes.empty()) {
        inst.label = lookup(format_.classes, field);
        if (inst.label < 0) throw Error(where(path_, lineNo_) + "unknown class '" + field + "'");
      } else {
        const auto v = parseNumber(field);
        if (!v || *v != std::floor(*v) || *v < 0 || *v >= format_.numClasses)
          throw Error(where(path_, lineNo_) + "bad class label '" + field + "'");
        inst.label = static_cast<int>(*v);
      }
      continue;
    }
    const Attribute& attr = schema_.attributes[a++];
    if (attr.isNominal()) {
      const int code = lookup(attr.values, field);
      if (code < 0) throw Error(where(path_, lineNo_) + "unknown nominal value '" + field + "'");
      inst.features.push_back(code);
    } else {
      const auto v = parseNumber(field);
      if (!v) throw Error(where(path_, lineNo_) + "cannot parse number '" + field + "'");
      inst.features.push_back(*v);
    }
  }
  inst.index = t_++;
  return inst;
}

std::optional<Instance> DelimitedFileStream::next() {
  if (pending_) {
    const std::string line = std::move(*pending_);
    pending_.reset();
    return parseRow(split(line, format_.delimiter));
  }
  std::string line;
  while (std::getline(in_, line)) {
    ++lineNo_;
    if (trim(line).empty()) continue;
    return parseRow(split(line, format_.delimiter));
  }
  return std::nullopt;
}

ArffFileStream::ArffFileStream(const std::string& path) : in_(path), path_(path) {
  if (!in_) throw Error("cannot open '" + path + "'");
  std::string line;
  bool sawData = false;
  std::vector<Attribute> attrs;
  while (std::getline(in_, line)) {
    ++lineNo_;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '%') continue;
    std::string lower = t;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower.rfind("@relation", 0) == 0) continue;
    if (lower.rfind("@data", 0) == 0) {
      sawData = true;
      break;
    }
    if (lower.rfind("@attribute", 0) != 0) throw Error(where(path_, lineNo_) + "unexpected header line");
    std::string rest = trim(std::string_view(t).substr(10));
    std::string name;
    if (!rest.empty() && (rest[0] == '\'' || rest[0] == '"')) {
      const auto close = rest.find(rest[0], 1);
      if (close == std::string::npos) throw Error(where(path_, lineNo_) + "unterminated attribute name");
      name = rest.substr(1, close - 1);
      rest = trim(std::string_view(rest).substr(close + 1));
    } else {
      const auto sp = rest.find_first_of(" \t");
      if (sp == std::string::npos) throw Error(where(path_, lineNo_) + "attribute without type");
      name = rest.substr(0, sp);
      rest = trim(std::string_view(rest).substr(sp));
    }
    if (!rest.empty() && rest[0] == '{') {
      const auto close = rest.find('}');
      if (close == std::string::npos) throw Error(where(path_, lineNo_) + "unterminated nominal list");
      attrs.push_back(Attribute::nominal(name, split(std::string_view(rest).substr(1, close - 1), ',')));
    } else {
      std::string type = rest;
      std::transform(type.begin(), type.end(), type.begin(), [](unsigned char c) { return std::tolower(c); });
      if (type != "numeric" && type != "real" && type != "integer")
        throw Error(where(path_, lineNo_) + "unsupported attribute type '" + rest + "'");
      attrs.push_back(Attribute::numeric(name));
    }
  }
  if (!sawData) throw Error(path_ + ": missing @data section");
  if (attrs.empty() || !attrs.back().isNominal())
    throw Error(path_ + ": the last attribute must be a nominal class");
  schema_.classNames = attrs.back().values;
  attrs.pop_back();
  schema_.attributes = std::move(attrs);
}

std::optional<Instance> ArffFileStream::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++lineNo_;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '%') continue;
    const auto fields = split(t, ',');
    const std::size_t d = schema_.dimension();
    if (fields.size() != d + 1)
      throw Error(where(path_, lineNo_) + "expected " + std::to_string(d + 1) + " fields, got " +
                  std::to_string(fields.size()));
    Instance inst;
    inst.features.reserve(d);
    for (std::size_t a = 0; a < d; ++a) {
      const Attribute& attr = schema_.attributes[a];
      if (fields[a] == "?") throw Error(where(path_, lineNo_) + "missing values are not supported");
      if (attr.isNominal()) {
        const int code = lookup(attr.values, fields[a]);
        if (code < 0) throw Error(where(path_, lineNo_) + "unknown nominal value '" + fields[a] + "'");
        inst.features.push_back(code);
      } else {
        const auto v = parseNumber(fields[a]);
        if (!v) throw Error(where(path_, lineNo_) + "cannot parse number '" + fields[a] + "'");
        inst.features.push_back(*v);
      }
    }
    inst.label = lookup(schema_.classNames, fields[d]);
    if (inst.label < 0) throw Error(where(path_, lineNo_) + "unknown class '" + fields[d] + "'");
    inst.index = t_++;
    return inst;
  }
  return std::nullopt;
}

std::unique_ptr<InstanceStream> readDelimitedDataset(const std::string& path, const FileFormat& format) {
  if (format.kind == FileFormat::Kind::arff) return std::make_unique<ArffFileStream>(path);
  return std::make_unique<DelimitedFileStream>(path, format);
}

std::unique_ptr<InstanceStream> makeStream(const StreamSpec& spec) {
  spec.validate();
  if (spec.generatorName == "agrawal") return makeAgrawal(spec);
  if (spec.generatorName == "sea") return makeSEA(spec);
  if (spec.generatorName == "sine1") return makeSine1(spec);
  if (spec.generatorName == "gauss") return makeGauss(spec);
  return readDelimitedDataset(spec.path, spec.format);
}

}  // namespace desdd
