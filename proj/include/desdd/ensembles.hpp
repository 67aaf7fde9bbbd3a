#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "desdd/instance.hpp"
#include "desdd/learners.hpp"
#include "desdd/rng.hpp"

namespace desdd {

/// Exact Poisson(lambda) draw. Multiplication method for lambda <= 30;
/// larger intensities are split into a sum of Poisson(30) draws plus a remainder.
std::uint32_t poissonSample(double lambda, Rng& rng);

/// Prequential accuracy since a first time step f:
///   Acc(f) = acc_ex(f);  Acc(t) = Acc(t-1) + (acc_ex(t) - Acc(t-1)) / (t - f + 1).
class PrequentialAccuracy {
 public:
  explicit PrequentialAccuracy(std::uint64_t firstStep = 0) : first_(firstStep) {}

  double update(bool correct, std::uint64_t t);

  double value() const { return value_; }
  std::uint64_t firstStep() const { return first_; }
  std::uint64_t count() const { return count_; }

 private:
  std::uint64_t first_;
  double value_ = 0.0;
  std::uint64_t count_ = 0;
};

/// Plurality vote; ties go to the lowest class index.
int majorityVote(std::span<const int> votes, int numClasses);

/// Vote weighted per voter; ties go to the lowest class index.
int weightedVote(std::span<const int> votes, std::span<const double> weights, int numClasses);

/// Fraction of voters disagreeing with `output`.
double ambiguity(std::span<const int> votes, int output);

/// Online Bagging ensemble with Poisson(lambda) resampling. Each member
/// sees each training instance k ~ Poisson(lambda) times, drawn independently
/// per member. Also carries its own prequential accuracy since creation.
class OnlineBagging {
 public:
  OnlineBagging(const Schema& schema, const LearnerConfig& learner, std::size_t size, double lambda,
                std::uint64_t creationStep, std::uint64_t seed);

  OnlineBagging(const OnlineBagging& other);
  OnlineBagging& operator=(const OnlineBagging& other);
  OnlineBagging(OnlineBagging&&) noexcept = default;
  OnlineBagging& operator=(OnlineBagging&&) noexcept = default;

  /// Member predictions in member order.
  std::vector<int> votes(std::span<const double> features) const;
  int predict(std::span<const double> features) const;
  /// Ambiguity of the members against the ensemble's own majority output.
  double ambiguity(std::span<const double> features) const;

  void train(const Instance& instance);

  double updatePrequential(bool correct, std::uint64_t t) { return accuracy_.update(correct, t); }
  double accuracy() const { return accuracy_.value(); }
  const PrequentialAccuracy& prequential() const { return accuracy_; }
  /// Forgets the accuracy history; the next update must be at step `firstStep`.
  void restartPrequential(std::uint64_t firstStep) { accuracy_ = PrequentialAccuracy(firstStep); }

  std::size_t size() const { return members_.size(); }
  double lambda() const { return lambda_; }
  std::uint64_t creationStep() const { return creationStep_; }
  int numClasses() const { return schema_.numClasses(); }
  const OnlineLearner& member(std::size_t i) const { return *members_.at(i); }
  OnlineLearner& member(std::size_t i) { return *members_.at(i); }
  /// Replaces member i with a fresh untrained learner.
  void resetMember(std::size_t i);
  /// Total single-instance trainings delivered to members so far.
  std::uint64_t totalTrainings() const { return totalTrainings_; }

 private:
  Schema schema_;
  LearnerConfig learnerConfig_;
  std::vector<std::unique_ptr<OnlineLearner>> members_;
  double lambda_;
  std::uint64_t creationStep_;
  PrequentialAccuracy accuracy_;
  Rng rng_;
  std::uint64_t totalTrainings_ = 0;
};

/// Ensemble drawn from a population: same structure, different diversity level.
using CandidateEnsemble = OnlineBagging;

}  // namespace desdd
