#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "desdd/ensembles.hpp"
#include "desdd/streams.hpp"
#include "poisson_gof.hpp"

using namespace desdd;

namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double zeroFraction = 0.0;
};

Moments sampleMoments(double lambda, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  double sum = 0.0, sumSq = 0.0;
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = poissonSample(lambda, rng);
    sum += k;
    sumSq += k * k;
    zeros += k == 0 ? 1 : 0;
  }
  const double dn = static_cast<double>(n);
  const double mean = sum / dn;
  return {mean, (sumSq - dn * mean * mean) / (dn - 1.0), static_cast<double>(zeros) / dn};
}

}  // namespace

TEST_CASE("majority vote: unanimity, tie and plurality") {
  CHECK(majorityVote(std::vector<int>(10, 1), 2) == 1);
  CHECK(majorityVote(std::vector<int>{1, 1, 1, 1, 1, 0, 0, 0, 0, 0}, 2) == 0);
  CHECK(majorityVote(std::vector<int>{0, 0, 0, 1, 1, 1, 1, 2, 2, 2}, 3) == 1);
}

TEST_CASE("majority vote is invariant to member order") {
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const int classes = 2 + static_cast<int>(rng.uniformInt(4));
    std::vector<int> votes(1 + rng.uniformInt(15));
    for (int& v : votes) v = static_cast<int>(rng.uniformInt(static_cast<std::uint64_t>(classes)));
    const int expected = majorityVote(votes, classes);
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
      for (std::size_t i = votes.size(); i > 1; --i) std::swap(votes[i - 1], votes[rng.uniformInt(i)]);
      REQUIRE(majorityVote(votes, classes) == expected);
    }
  }
}

TEST_CASE("weighted vote: weights 0.5, 0.3, 0.2 with votes A, B, A") {
  CHECK(weightedVote(std::vector<int>{0, 1, 0}, std::vector<double>{0.5, 0.3, 0.2}, 2) == 0);
  CHECK(weightedVote(std::vector<int>{1, 0, 1}, std::vector<double>{0.5, 0.3, 0.2}, 2) == 1);
  CHECK(weightedVote(std::vector<int>{0, 1}, std::vector<double>{0.5, 0.5}, 2) == 0);
  CHECK_THROWS_AS(weightedVote(std::vector<int>{0}, std::vector<double>{}, 2), Error);
}

TEST_CASE("ambiguity examples") {
  CHECK(ambiguity(std::vector<int>{2, 2, 2}, 2) == 0.0);
  CHECK(ambiguity(std::vector<int>{0, 0, 1}, 0) == doctest::Approx(1.0 / 3.0));
  const std::vector<int> split{0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
  CHECK(majorityVote(split, 2) == 0);
  CHECK(ambiguity(split, majorityVote(split, 2)) == 0.5);
}

TEST_CASE("ambiguity never exceeds (n-1)/n against the majority output") {
  Rng rng(12);
  for (int trial = 0; trial < 2000; ++trial) {
    const int classes = 2 + static_cast<int>(rng.uniformInt(9));
    const std::size_t n = 1 + rng.uniformInt(25);
    std::vector<int> votes(n);
    for (int& v : votes) v = static_cast<int>(rng.uniformInt(static_cast<std::uint64_t>(classes)));
    const double div = ambiguity(votes, majorityVote(votes, classes));
    REQUIRE(div >= 0.0);
    REQUIRE(div <= static_cast<double>(n - 1) / static_cast<double>(n) + 1e-15);
  }
}

TEST_CASE("prequential accuracy: first step, [1,0,1] and running-mean equivalence") {
  PrequentialAccuracy a(5);
  CHECK(a.update(true, 5) == 1.0);
  PrequentialAccuracy b(0);
  b.update(true, 0);
  b.update(false, 1);
  CHECK(b.update(true, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  Rng rng(2);
  PrequentialAccuracy c(100);
  std::uint64_t ones = 0;
  for (std::uint64_t t = 100; t < 1100; ++t) {
    const bool bit = rng.uniform() < 0.7;
    ones += bit ? 1 : 0;
    c.update(bit, t);
    REQUIRE(std::abs(c.value() - static_cast<double>(ones) / static_cast<double>(t - 99)) <= 1e-12);
  }
  CHECK(c.count() == 1000);
  CHECK_THROWS_AS(c.update(true, 99), Error);
}

TEST_CASE("Poisson sampler moments") {
  const auto small = sampleMoments(0.001, 1000000, 1);
  CHECK(std::abs(small.zeroFraction - std::exp(-0.001)) <= 0.001);
  const auto six = sampleMoments(6.0, 1000000, 2);
  CHECK(std::abs(six.mean - 6.0) <= 0.01);
  CHECK(std::abs(six.variance - 6.0) <= 0.1);
  const auto hundred = sampleMoments(100.0, 1000000, 3);
  CHECK(std::abs(hundred.mean - 100.0) <= 0.05);
  CHECK(std::abs(hundred.variance - 100.0) <= 1.0);
}

TEST_CASE("Poisson sampler passes chi-square goodness of fit") {
  std::uint64_t seed = 40;
  for (double lambda : {0.001, 0.5, 1.0, 6.0, 100.0}) {
    INFO("lambda " << lambda);
    CHECK(testing::poissonGofPValue(lambda, 100000, seed++) > 0.01);
  }
}

TEST_CASE("Poisson sampler rejects non-positive intensity") {
  Rng rng(1);
  CHECK_THROWS_AS(poissonSample(0.0, rng), Error);
  CHECK_THROWS_AS(poissonSample(-1.0, rng), Error);
  CHECK(poissonSample(200.0, rng) > 100);
}

TEST_CASE("online bagging: lambda 0.001 trains about 100 times in 10,000 instances") {
  auto stream = makeStream(presetSpec("sea_abrupt", 4));
  OnlineBagging ens(stream->schema(), LearnerConfig{}, 10, 0.001, 0, 99);
  while (auto inst = stream->next()) ens.train(*inst);
  // Expected 100 trainings; the Poisson standard deviation is 10.
  CHECK(ens.totalTrainings() >= 70);
  CHECK(ens.totalTrainings() <= 130);
}

TEST_CASE("online bagging: lambda 100 trains every member on every instance") {
  const Schema schema = Schema::numericOnly(2, 2);
  OnlineBagging ens(schema, LearnerConfig{}, 10, 100.0, 0, 5);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) ens.train(Instance{{rng.uniform(), rng.uniform()}, i % 2, 0});
  for (std::size_t m = 0; m < ens.size(); ++m) CHECK(ens.member(m).trainedCount() >= 100 * 50);
}

TEST_CASE("online bagging is deterministic under a seed") {
  auto spec = presetSpec("sea_abrupt", 6);
  auto s1 = makeStream(spec);
  auto s2 = makeStream(spec);
  OnlineBagging a(s1->schema(), LearnerConfig{}, 10, 1.0, 0, 123);
  OnlineBagging b(s2->schema(), LearnerConfig{}, 10, 1.0, 0, 123);
  OnlineBagging other(s2->schema(), LearnerConfig{}, 10, 1.0, 0, 124);
  bool differs = false;
  for (int i = 0; i < 3000; ++i) {
    const auto x = *s1->next();
    s2->next();
    REQUIRE(a.votes(x.features) == b.votes(x.features));
    differs = differs || a.votes(x.features) != other.votes(x.features);
    a.train(x);
    b.train(x);
    other.train(x);
  }
  for (std::size_t m = 0; m < a.size(); ++m) CHECK(a.member(m).trainedCount() == b.member(m).trainedCount());
  CHECK(differs);
}

TEST_CASE("online bagging: ambiguity agrees with its votes, copies are deep") {
  auto stream = makeStream(presetSpec("sea_abrupt", 8));
  OnlineBagging ens(stream->schema(), LearnerConfig{}, 7, 0.5, 0, 1);
  for (int i = 0; i < 2000; ++i) ens.train(*stream->next());
  const auto x = *stream->next();
  const auto v = ens.votes(x.features);
  CHECK(ens.ambiguity(x.features) == ambiguity(v, majorityVote(v, 2)));
  OnlineBagging copy = ens;
  copy.train(x);
  CHECK(copy.totalTrainings() >= ens.totalTrainings());
  copy.resetMember(0);
  CHECK(copy.member(0).trainedCount() == 0);
  CHECK(ens.member(0).trainedCount() > 0);
}

TEST_CASE("online bagging rejects empty ensembles and bad lambda") {
  const Schema schema = Schema::numericOnly(1, 2);
  CHECK_THROWS_AS(OnlineBagging(schema, LearnerConfig{}, 0, 1.0, 0, 1), Error);
  CHECK_THROWS_AS(OnlineBagging(schema, LearnerConfig{}, 3, 0.0, 0, 1), Error);
}
