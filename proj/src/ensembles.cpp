#include "desdd/ensembles.hpp"

#include <cmath>

namespace desdd {

namespace {

constexpr double kKnuthLimit = 30.0;

std::uint32_t knuthPoisson(double lambda, Rng& rng) {
  const double limit = std::exp(-lambda);
  std::uint32_t k = 0;
  double p = rng.uniform();
  while (p > limit) {
    ++k;
    p *= rng.uniform();
  }
  return k;
}

}  // namespace

std::uint32_t poissonSample(double lambda, Rng& rng) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error("Poisson intensity must be positive and finite");
  std::uint32_t total = 0;
  double rest = lambda;
  while (rest > kKnuthLimit) {
    total += knuthPoisson(kKnuthLimit, rng);
    rest -= kKnuthLimit;
  }
  return total + knuthPoisson(rest, rng);
}

double PrequentialAccuracy::update(bool correct, std::uint64_t t) {
  if (t < first_) throw Error("prequential update before the first time step");
  const double acc = correct ? 1.0 : 0.0;
  if (t == first_)
    value_ = acc;
  else
    value_ += (acc - value_) / static_cast<double>(t - first_ + 1);
  ++count_;
  return value_;
}

int majorityVote(std::span<const int> votes, int numClasses) {
  std::vector<int> counts(static_cast<std::size_t>(numClasses), 0);
  for (int v : votes) ++counts[static_cast<std::size_t>(v)];
  int best = 0;
  for (int c = 1; c < numClasses; ++c)
    if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(best)]) best = c;
  return best;
}

int weightedVote(std::span<const int> votes, std::span<const double> weights, int numClasses) {
  if (votes.size() != weights.size()) throw Error("one weight per vote required");
  std::vector<double> mass(static_cast<std::size_t>(numClasses), 0.0);
  for (std::size_t i = 0; i < votes.size(); ++i) mass[static_cast<std::size_t>(votes[i])] += weights[i];
  return argmaxLowest(mass);
}

double ambiguity(std::span<const int> votes, int output) {
  if (votes.empty()) return 0.0;
  std::size_t disagree = 0;
  for (int v : votes) disagree += v != output ? 1 : 0;
  return static_cast<double>(disagree) / static_cast<double>(votes.size());
}

// ---------------------------------------------------------------------------
// OnlineBagging

OnlineBagging::OnlineBagging(const Schema& schema, const LearnerConfig& learner, std::size_t size, double lambda,
                             std::uint64_t creationStep, std::uint64_t seed)
    : schema_(schema), learnerConfig_(learner), lambda_(lambda), creationStep_(creationStep), accuracy_(creationStep), rng_(seed) {
  if (size < 1) throw Error("an ensemble needs at least one member");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error("ensemble lambda must be positive and finite");
  members_.reserve(size);
  for (std::size_t i = 0; i < size; ++i) members_.push_back(makeLearner(learnerConfig_, schema_));
}

OnlineBagging::OnlineBagging(const OnlineBagging& other)
    : schema_(other.schema_),
      learnerConfig_(other.learnerConfig_),
      lambda_(other.lambda_),
      creationStep_(other.creationStep_),
      accuracy_(other.accuracy_),
      rng_(other.rng_),
      totalTrainings_(other.totalTrainings_) {
  members_.reserve(other.members_.size());
  for (const auto& m : other.members_) members_.push_back(m->clone());
}

OnlineBagging& OnlineBagging::operator=(const OnlineBagging& other) {
  if (this != &other) {
    OnlineBagging copy(other);
    *this = std::move(copy);
  }
  return *this;
}

std::vector<int> OnlineBagging::votes(std::span<const double> features) const {
  std::vector<int> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(m->predict(features));
  return out;
}

int OnlineBagging::predict(std::span<const double> features) const {
  const auto v = votes(features);
  return majorityVote(v, numClasses());
}

double OnlineBagging::ambiguity(std::span<const double> features) const {
  const auto v = votes(features);
  return desdd::ambiguity(v, majorityVote(v, numClasses()));
}

void OnlineBagging::train(const Instance& instance) {
  for (auto& m : members_) {
    const std::uint32_t k = poissonSample(lambda_, rng_);
    if (k > 0) {
      m->train(instance, k);
      totalTrainings_ += k;
    }
  }
}

void OnlineBagging::resetMember(std::size_t i) { members_.at(i) = makeLearner(learnerConfig_, schema_); }

}  // namespace desdd
