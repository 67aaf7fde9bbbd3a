#include "desdd/desdd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace desdd {

namespace {
enum SeedKey : std::uint64_t { kPopulationKey = 0x706f70, kLambdaKey = 0x6c616d };
}

std::string_view toString(DriftTrigger trigger) {
  switch (trigger) {
    case DriftTrigger::anyEnsemble: return "any";
    case DriftTrigger::majority: return "majority";
    case DriftTrigger::expert: return "expert";
  }
  return "any";
}

DriftTrigger parseDriftTrigger(std::string_view text) {
  if (text == "any") return DriftTrigger::anyEnsemble;
  if (text == "majority") return DriftTrigger::majority;
  if (text == "expert") return DriftTrigger::expert;
  throw Error("unknown drift trigger '" + std::string(text) + "'");
}

void DesddConfig::validate() const {
  if (fixedLambdas.empty()) {
    if (populationSize < 1) throw Error("population size must be at least 1");
    if (!(lambdaMin > 0.0 && lambdaMin <= lambdaMax) || !std::isfinite(lambdaMax))
      throw Error("lambda bounds must satisfy 0 < lambda_min <= lambda_max");
  }
  for (double l : fixedLambdas)
    if (!(l > 0.0) || !std::isfinite(l)) throw Error("fixed lambdas must be positive");
  if (ensembleSize < 1) throw Error("ensemble size must be at least 1");
  detector.validate();
  learner.validate();
}

std::uint64_t Desdd::ensembleSeed(std::uint64_t seed, std::uint64_t generation, std::size_t index) {
  return deriveSeed(deriveSeed(deriveSeed(seed, kPopulationKey), generation), index);
}

std::vector<double> Desdd::sampleLambdas(const DesddConfig& config, std::uint64_t generation) {
  if (!config.fixedLambdas.empty()) return config.fixedLambdas;
  Rng rng(deriveSeed(deriveSeed(config.seed, kLambdaKey), generation));
  std::vector<double> out;
  out.reserve(config.populationSize);
  const double lo = std::log(config.lambdaMin);
  const double hi = std::log(config.lambdaMax);
  for (std::size_t i = 0; i < config.populationSize; ++i) {
    const double u = rng.uniform();
    double lambda = config.lambdaMin == config.lambdaMax ? config.lambdaMin : std::exp(lo + u * (hi - lo));
    out.push_back(std::clamp(lambda, config.lambdaMin, config.lambdaMax));
  }
  return out;
}

Desdd::Desdd(const Schema& schema, DesddConfig config) : schema_(schema), config_(std::move(config)) {
  config_.validate();
  generatePopulation(0);
}

void Desdd::generatePopulation(std::uint64_t creationStep) {
  const auto lambdas = sampleLambdas(config_, generation_);
  population_.clear();
  detectors_.clear();
  population_.reserve(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    population_.emplace_back(schema_, config_.learner, config_.ensembleSize, lambdas[i], creationStep,
                             ensembleSeed(config_.seed, generation_, i));
  }
  const std::size_t monitors = config_.trigger == DriftTrigger::expert ? 1 : lambdas.size();
  for (std::size_t i = 0; i < monitors; ++i) detectors_.push_back(makeDetector(config_.detector));
  fired_.assign(monitors, false);
  firedBuffers_.assign(monitors, {});
  diversity_.assign(lambdas.size(), 0.0);
  ++generation_;
}

std::vector<double> Desdd::candidateLambdas() const {
  std::vector<double> out;
  for (const auto& e : population_) out.push_back(e.lambda());
  return out;
}

std::size_t Desdd::selectExpert() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < population_.size(); ++i)
    if (population_[i].accuracy() > population_[best].accuracy()) best = i;
  return best;
}

StepResult Desdd::process(const Instance& instance) {
  const std::uint64_t t = step_++;
  const std::size_t c = population_.size();
  const int classes = schema_.numClasses();

  std::vector<int> predictions(c);
  for (std::size_t i = 0; i < c; ++i) {
    const auto votes = population_[i].votes(instance.features);
    predictions[i] = majorityVote(votes, classes);
    diversity_[i] = ambiguity(votes, predictions[i]);
  }

  StepResult result;
  const std::size_t expert = selectExpert();
  result.selectedIndex = static_cast<int>(expert);
  result.selectedLambda = population_[expert].lambda();
  result.predicted = predictions[expert];

  for (std::size_t i = 0; i < c; ++i) population_[i].updatePrequential(predictions[i] == instance.label, t);

  const std::size_t monitors = detectors_.size();
  bool anyWarning = false;
  for (std::size_t i = 0; i < monitors; ++i) {
    const int monitored = config_.trigger == DriftTrigger::expert ? result.predicted : predictions[i];
    const DriftLevel level = detectors_[i]->update(monitored == instance.label);
    if (level == DriftLevel::warning) {
      anyWarning = true;
      detectors_[i]->pushWarning(instance);
    } else if (level == DriftLevel::drift && !fired_[i]) {
      fired_[i] = true;
      firedBuffers_[i] = detectors_[i]->drain();
    }
  }

  const auto firedCount = static_cast<std::size_t>(std::count(fired_.begin(), fired_.end(), true));
  const bool drift = config_.trigger == DriftTrigger::majority ? 2 * firedCount > monitors : firedCount > 0;
  if (drift) {
    // Retrain from the longest buffer among the detectors that fired; ties to the lowest slot.
    std::size_t source = monitors;
    for (std::size_t i = 0; i < monitors; ++i)
      if (fired_[i] && (source == monitors || firedBuffers_[i].size() > firedBuffers_[source].size())) source = i;
    driftLog_.push_back(t);
    reactToDrift(std::move(firedBuffers_[source]));
    result.signal = DriftLevel::drift;
    return result;
  }

  for (auto& e : population_) e.train(instance);
  result.signal = anyWarning ? DriftLevel::warning : DriftLevel::stable;
  return result;
}

void Desdd::reactToDrift(std::vector<Instance> buffer) {
  generatePopulation(step_);
  if (!detectors_.empty() && detectors_.front()->hasWarningLevel()) {
    for (auto& e : population_)
      for (const Instance& inst : buffer) e.train(inst);
  }
}

}  // namespace desdd
