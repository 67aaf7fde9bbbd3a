#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "desdd/detectors.hpp"
#include "desdd/ensembles.hpp"
#include "desdd/learners.hpp"
#include "desdd/method.hpp"

namespace desdd {

/// One base learner monitored by DDM. On drift the learner is replaced by a
/// fresh one trained on the instances buffered during the warning phase.
class SingleDdm final : public StreamMethod {
 public:
  SingleDdm(const Schema& schema, LearnerConfig learner = {}, DdmParams ddm = {},
            std::size_t bufferCapacity = 1000);

  StepResult process(const Instance& instance) override;
  std::string name() const override { return "ddm_single"; }
  const std::vector<std::uint64_t>& driftLog() const override { return driftLog_; }

  const OnlineLearner& learner() const { return *learner_; }
  const Ddm& detector() const { return detector_; }

 private:
  Schema schema_;
  LearnerConfig learnerConfig_;
  std::unique_ptr<OnlineLearner> learner_;
  Ddm detector_;
  std::vector<std::uint64_t> driftLog_;
  std::uint64_t step_ = 0;
};

struct LeveragingBaggingConfig {
  std::size_t ensembleSize = 10;
  double lambda = 6.0;
  AdwinParams adwin;
  /// Insertions between ADWIN cut tests for the member detectors.
  std::uint64_t adwinClock = 32;
  LearnerConfig learner;
  std::uint64_t seed = 1;
};

/// Online Bagging with Poisson(6) resampling and one ADWIN per member. When
/// any ADWIN detects an increase in its member's error, the member with the
/// highest estimated error is replaced by a fresh learner with a fresh detector.
class LeveragingBagging final : public StreamMethod {
 public:
  LeveragingBagging(const Schema& schema, LeveragingBaggingConfig config = {});

  StepResult process(const Instance& instance) override;
  std::string name() const override { return "leveraging_bagging"; }
  const std::vector<std::uint64_t>& driftLog() const override { return driftLog_; }

  const OnlineBagging& ensemble() const { return ensemble_; }
  OnlineBagging& ensemble() { return ensemble_; }
  const Adwin& memberDetector(std::size_t i) const { return detectors_.at(i); }
  /// Member indices replaced so far, in order.
  const std::vector<std::size_t>& replacements() const { return replaced_; }

  static std::uint64_t ensembleSeed(std::uint64_t seed);
  static AdwinParams memberAdwin(const LeveragingBaggingConfig& config);

 private:
  LeveragingBaggingConfig config_;
  OnlineBagging ensemble_;
  std::vector<Adwin> detectors_;
  std::vector<std::uint64_t> driftLog_;
  std::vector<std::size_t> replaced_;
  std::uint64_t step_ = 0;
};

struct DddConfig {
  std::size_t ensembleSize = 25;
  double lambdaLow = 1.0;
  double lambdaHigh = 0.005;
  EddmParams eddm;
  LearnerConfig learner;
  /// Steps after a drift before the return-to-single-pair test is applied.
  std::uint64_t reentryMinSteps = 30;
  std::uint64_t seed = 1;
};

/// Diversity for Dealing with Drifts: a low/high diversity pair before drift;
/// after a drift the old pair is kept alongside a new pair and the low-diversity
/// ensembles vote, weighted by prequential accuracy since the drift.
class Ddd final : public StreamMethod {
 public:
  enum class Mode { beforeDrift, afterDrift };

  Ddd(const Schema& schema, DddConfig config = {});

  StepResult process(const Instance& instance) override;
  std::string name() const override { return "ddd"; }
  const std::vector<std::uint64_t>& driftLog() const override { return driftLog_; }

  Mode mode() const { return mode_; }
  std::size_t ensembleCount() const { return mode_ == Mode::beforeDrift ? 2 : 4; }
  const OnlineBagging& lowNew() const { return *lowNew_; }
  const OnlineBagging& highNew() const { return *highNew_; }
  const OnlineBagging* lowOld() const { return lowOld_ ? &*lowOld_ : nullptr; }
  const OnlineBagging* highOld() const { return highOld_ ? &*highOld_ : nullptr; }

  /// Normalised weights for (lowOld, highOld, lowNew); uniform when all accuracies are zero.
  std::vector<double> votingWeights() const;

 private:
  OnlineBagging freshEnsemble(double lambda, std::uint64_t creationStep);

  Schema schema_;
  DddConfig config_;
  Mode mode_ = Mode::beforeDrift;
  std::optional<OnlineBagging> lowNew_, highNew_, lowOld_, highOld_;
  Eddm detector_;
  std::vector<std::uint64_t> driftLog_;
  std::uint64_t step_ = 0;
  std::uint64_t lastDrift_ = 0;
  std::uint64_t created_ = 0;
};

}  // namespace desdd
