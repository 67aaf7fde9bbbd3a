#include "desdd/baselines.hpp"

#include <algorithm>
#include <array>

namespace desdd {

// ---------------------------------------------------------------------------
// SingleDdm

SingleDdm::SingleDdm(const Schema& schema, LearnerConfig learner, DdmParams ddm, std::size_t bufferCapacity)
    : schema_(schema),
      learnerConfig_(learner),
      learner_(makeLearner(learnerConfig_, schema_)),
      detector_(ddm, bufferCapacity) {}

StepResult SingleDdm::process(const Instance& instance) {
  const std::uint64_t t = step_++;
  StepResult result;
  result.predicted = learner_->predict(instance.features);
  result.signal = detector_.update(result.predicted == instance.label);
  switch (result.signal) {
    case DriftLevel::drift: {
      driftLog_.push_back(t);
      learner_ = makeLearner(learnerConfig_, schema_);
      for (const Instance& buffered : detector_.drain()) learner_->train(buffered);
      break;
    }
    case DriftLevel::warning:
      detector_.pushWarning(instance);
      learner_->train(instance);
      break;
    case DriftLevel::stable:
      learner_->train(instance);
      break;
  }
  return result;
}

// ---------------------------------------------------------------------------
// LeveragingBagging

std::uint64_t LeveragingBagging::ensembleSeed(std::uint64_t seed) { return deriveSeed(seed, 0x6c62); }

AdwinParams LeveragingBagging::memberAdwin(const LeveragingBaggingConfig& config) {
  AdwinParams p = config.adwin;
  p.clock = config.adwinClock;
  return p;
}

LeveragingBagging::LeveragingBagging(const Schema& schema, LeveragingBaggingConfig config)
    : config_(std::move(config)),
      ensemble_(schema, config_.learner, config_.ensembleSize, config_.lambda, 0, ensembleSeed(config_.seed)),
      detectors_(config_.ensembleSize, Adwin(memberAdwin(config_))) {}

StepResult LeveragingBagging::process(const Instance& instance) {
  const std::uint64_t t = step_++;
  const auto votes = ensemble_.votes(instance.features);
  StepResult result;
  result.predicted = majorityVote(votes, ensemble_.numClasses());

  // A cut only counts as change when the member's estimated error went up;
  // cuts caused by a member getting better are ignored.
  bool change = false;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    const double before = detectors_[i].errorEstimate();
    if (detectors_[i].update(votes[i] == instance.label) == DriftLevel::drift &&
        detectors_[i].errorEstimate() > before)
      change = true;
  }

  if (change) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < detectors_.size(); ++i)
      if (detectors_[i].errorEstimate() > detectors_[worst].errorEstimate()) worst = i;
    ensemble_.resetMember(worst);
    detectors_[worst].reset();
    replaced_.push_back(worst);
    driftLog_.push_back(t);
    result.signal = DriftLevel::drift;
  }
  ensemble_.train(instance);
  return result;
}

// ---------------------------------------------------------------------------
// Ddd

Ddd::Ddd(const Schema& schema, DddConfig config)
    : schema_(schema), config_(std::move(config)), detector_(config_.eddm) {
  lowNew_.emplace(freshEnsemble(config_.lambdaLow, 0));
  highNew_.emplace(freshEnsemble(config_.lambdaHigh, 0));
}

OnlineBagging Ddd::freshEnsemble(double lambda, std::uint64_t creationStep) {
  return OnlineBagging(schema_, config_.learner, config_.ensembleSize, lambda, creationStep,
                       deriveSeed(config_.seed, created_++));
}

std::vector<double> Ddd::votingWeights() const {
  if (mode_ == Mode::beforeDrift) return {0.0, 0.0, 1.0};
  std::vector<double> w = {lowOld_->accuracy(), highOld_->accuracy(), lowNew_->accuracy()};
  double sum = w[0] + w[1] + w[2];
  if (sum <= 0.0) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  for (double& x : w) x /= sum;
  return w;
}

StepResult Ddd::process(const Instance& instance) {
  const std::uint64_t t = step_++;
  const int classes = schema_.numClasses();
  StepResult result;

  const int lowNewVote = lowNew_->predict(instance.features);
  const int highNewVote = highNew_->predict(instance.features);
  int lowOldVote = 0, highOldVote = 0;
  if (mode_ == Mode::beforeDrift) {
    result.predicted = lowNewVote;
  } else {
    lowOldVote = lowOld_->predict(instance.features);
    highOldVote = highOld_->predict(instance.features);
    const std::array<int, 3> votes = {lowOldVote, highOldVote, lowNewVote};
    const auto weights = votingWeights();
    result.predicted = weightedVote(votes, weights, classes);
  }

  lowNew_->updatePrequential(lowNewVote == instance.label, t);
  highNew_->updatePrequential(highNewVote == instance.label, t);
  if (mode_ == Mode::afterDrift) {
    lowOld_->updatePrequential(lowOldVote == instance.label, t);
    highOld_->updatePrequential(highOldVote == instance.label, t);
  }

  result.signal = detector_.update(result.predicted == instance.label);
  if (result.signal == DriftLevel::drift) {
    driftLog_.push_back(t);
    lastDrift_ = t;
    // The current pair becomes the old pair; accuracies restart from the next step.
    lowOld_.emplace(std::move(*lowNew_));
    highOld_.emplace(std::move(*highNew_));
    lowOld_->restartPrequential(t + 1);
    highOld_->restartPrequential(t + 1);
    lowNew_.emplace(freshEnsemble(config_.lambdaLow, t + 1));
    highNew_.emplace(freshEnsemble(config_.lambdaHigh, t + 1));
    mode_ = Mode::afterDrift;
  } else if (mode_ == Mode::afterDrift && t - lastDrift_ >= config_.reentryMinSteps &&
             lowNew_->accuracy() > lowOld_->accuracy() && lowNew_->accuracy() > highOld_->accuracy()) {
    lowOld_.reset();
    highOld_.reset();
    mode_ = Mode::beforeDrift;
  }

  lowNew_->train(instance);
  highNew_->train(instance);
  if (mode_ == Mode::afterDrift) {
    lowOld_->train(instance);
    highOld_->train(instance);
  }
  return result;
}

}  // namespace desdd
