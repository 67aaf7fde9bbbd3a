#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "desdd/detectors.hpp"
#include "desdd/ensembles.hpp"
#include "desdd/learners.hpp"
#include "desdd/method.hpp"

namespace desdd {

/// How per-ensemble detector signals combine into a population-wide drift.
enum class DriftTrigger {
  anyEnsemble,  // the first ensemble whose detector fires triggers replacement
  majority,     // replacement once more than half the detectors fired since the last reaction
  expert,       // one detector fed with the correctness of the emitted (expert) prediction
};

std::string_view toString(DriftTrigger trigger);
DriftTrigger parseDriftTrigger(std::string_view text);

struct DesddConfig {
  std::size_t populationSize = 11;
  std::size_t ensembleSize = 10;
  double lambdaMin = 0.001;
  double lambdaMax = 100.0;
  /// When non-empty, every generation uses exactly these lambdas (one
  /// ensemble each) instead of sampling; populationSize is ignored.
  std::vector<double> fixedLambdas;
  DetectorConfig detector;
  LearnerConfig learner;
  DriftTrigger trigger = DriftTrigger::expert;
  std::uint64_t seed = 1;

  void validate() const;
  std::size_t effectivePopulationSize() const {
    return fixedLambdas.empty() ? populationSize : fixedLambdas.size();
  }
};

/// Dynamic ensemble selection over a population of Online Bagging ensembles
/// of varied diversity, with per-ensemble drift monitoring and wholesale
/// population replacement on drift.
class Desdd final : public StreamMethod {
 public:
  Desdd(const Schema& schema, DesddConfig config);

  /// Predicts with the expert ensemble, scores and monitors every ensemble,
  /// then either trains the population or replaces it.
  StepResult process(const Instance& instance) override;

  std::string name() const override { return "desdd"; }
  const std::vector<std::uint64_t>& driftLog() const override { return driftLog_; }
  std::span<const double> lastDiversity() const override { return diversity_; }
  std::vector<double> candidateLambdas() const override;

  /// Highest prequential accuracy wins; ties go to the lowest slot.
  std::size_t selectExpert() const;

  /// Discards the population and builds a fresh one starting at the next step.
  /// With a warning-capable detector, each new ensemble is first trained on `buffer` in order.
  void reactToDrift(std::vector<Instance> buffer);

  const std::vector<CandidateEnsemble>& population() const { return population_; }
  std::vector<CandidateEnsemble>& population() { return population_; }
  /// One detector per ensemble, or a single one under the expert trigger.
  std::size_t detectorCount() const { return detectors_.size(); }
  const DriftDetector& detector(std::size_t i) const { return *detectors_.at(i); }
  std::uint64_t currentStep() const { return step_; }
  std::uint64_t generation() const { return generation_; }
  const DesddConfig& config() const { return config_; }

  /// Seed of ensemble `index` in population `generation`. Lets an external
  /// harness rebuild an identical ensemble.
  static std::uint64_t ensembleSeed(std::uint64_t seed, std::uint64_t generation, std::size_t index);
  /// Lambdas of population `generation` under `config`.
  static std::vector<double> sampleLambdas(const DesddConfig& config, std::uint64_t generation);

 private:
  void generatePopulation(std::uint64_t creationStep);

  Schema schema_;
  DesddConfig config_;
  std::vector<CandidateEnsemble> population_;
  std::vector<std::unique_ptr<DriftDetector>> detectors_;
  std::vector<bool> fired_;
  std::vector<std::vector<Instance>> firedBuffers_;
  std::vector<std::uint64_t> driftLog_;
  std::vector<double> diversity_;
  std::uint64_t step_ = 0;
  std::uint64_t generation_ = 0;
};

}  // namespace desdd
