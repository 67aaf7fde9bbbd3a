#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "desdd/desdd.hpp"
#include "desdd/streams.hpp"

using namespace desdd;

namespace {

DesddConfig fixed(std::vector<double> lambdas, std::uint64_t seed = 1) {
  DesddConfig cfg;
  cfg.fixedLambdas = std::move(lambdas);
  cfg.seed = seed;
  return cfg;
}

/// Gives ensemble i the accuracy correct[i] / total at step 0.
void setAccuracies(Desdd& d, const std::vector<int>& correct, int total) {
  for (std::size_t i = 0; i < correct.size(); ++i) {
    auto& e = d.population()[i];
    e.restartPrequential(0);
    for (int t = 0; t < total; ++t) e.updatePrequential(t < correct[i], static_cast<std::uint64_t>(t));
  }
}

}  // namespace

TEST_CASE("default population: 11 ensembles of 10 learners with log-uniform lambdas in range") {
  const Schema schema = Schema::numericOnly(3, 2);
  Desdd d(schema, DesddConfig{});
  REQUIRE(d.population().size() == 11);
  std::size_t learners = 0;
  for (const auto& e : d.population()) {
    learners += e.size();
    CHECK(e.lambda() >= 0.001);
    CHECK(e.lambda() <= 100.0);
    CHECK(e.creationStep() == 0);
  }
  CHECK(learners == 110);
  CHECK(d.detectorCount() == 1);  // expert trigger watches the emitted prediction

  DesddConfig any;
  any.trigger = DriftTrigger::anyEnsemble;
  CHECK(Desdd(schema, any).detectorCount() == 11);
}

TEST_CASE("lambda sampling: degenerate range, determinism, log-uniform spread") {
  DesddConfig cfg;
  cfg.lambdaMin = cfg.lambdaMax = 1.0;
  for (double l : Desdd::sampleLambdas(cfg, 0)) CHECK(l == 1.0);

  DesddConfig a;
  a.seed = 5;
  CHECK(Desdd::sampleLambdas(a, 3) == Desdd::sampleLambdas(a, 3));
  CHECK(Desdd::sampleLambdas(a, 3) != Desdd::sampleLambdas(a, 4));

  // Log-uniform over five decades: about a fifth of draws per decade.
  a.populationSize = 50000;
  std::vector<int> decade(5, 0);
  for (double l : Desdd::sampleLambdas(a, 0)) ++decade[std::min(4, static_cast<int>(std::floor(std::log10(l) + 3)))];
  for (int c : decade) CHECK(std::abs(c / 50000.0 - 0.2) < 0.01);
}

TEST_CASE("configuration errors") {
  const Schema schema = Schema::numericOnly(2, 2);
  DesddConfig cfg;
  cfg.lambdaMin = 2.0;
  cfg.lambdaMax = 1.0;
  CHECK_THROWS_AS(Desdd(schema, cfg), Error);
  cfg = DesddConfig{};
  cfg.populationSize = 0;
  CHECK_THROWS_AS(Desdd(schema, cfg), Error);
  cfg = DesddConfig{};
  cfg.ensembleSize = 0;
  CHECK_THROWS_AS(Desdd(schema, cfg), Error);
  CHECK_THROWS_AS(Desdd(schema, fixed({1.0, -2.0})), Error);
  CHECK_THROWS_AS(parseDriftTrigger("sometimes"), Error);
  CHECK((parseDriftTrigger(toString(DriftTrigger::majority)) == DriftTrigger::majority));
}

TEST_CASE("selectExpert: argmax with lowest-index ties") {
  const Schema schema = Schema::numericOnly(2, 2);
  Desdd d(schema, fixed({1.0, 1.0, 1.0}));
  CHECK(d.selectExpert() == 0);  // fresh population
  setAccuracies(d, {7, 9, 8}, 10);
  CHECK(d.selectExpert() == 1);
  setAccuracies(d, {5, 5, 5}, 10);
  CHECK(d.selectExpert() == 0);
  setAccuracies(d, {2, 6, 6}, 10);
  CHECK(d.selectExpert() == 1);
}

TEST_CASE("the emitted prediction is the expert ensemble's vote") {
  auto stream = makeStream(presetSpec("sea_abrupt", 3));
  Desdd d(stream->schema(), fixed({0.01, 0.1, 1.0, 5.0, 20.0}));
  for (int i = 0; i < 500; ++i) d.process(*stream->next());
  const auto step = d.currentStep();
  for (std::size_t i = 0; i < d.population().size(); ++i) {
    auto& e = d.population()[i];
    e.restartPrequential(step - 1);
    e.updatePrequential(i == 3, step - 1);
  }
  const auto inst = *stream->next();
  const int expected = d.population()[3].predict(inst.features);
  const auto r = d.process(inst);
  CHECK(r.selectedIndex == 3);
  CHECK(r.selectedLambda == 5.0);
  CHECK(r.predicted == expected);
}

TEST_CASE("reaction contract: after a drift at t every ensemble starts at t+1") {
  for (DriftTrigger trigger : {DriftTrigger::expert, DriftTrigger::anyEnsemble}) {
    auto stream = makeStream(presetSpec("sine1", 2));
    DesddConfig cfg;
    cfg.trigger = trigger;
    Desdd d(stream->schema(), cfg);
    std::size_t reactions = 0;
    while (auto inst = stream->next()) {
      const auto gen = d.generation();
      const auto r = d.process(*inst);
      REQUIRE(d.population().size() == 11);
      if (r.signal == DriftLevel::drift) {
        ++reactions;
        CHECK(d.generation() == gen + 1);
        CHECK(d.driftLog().back() == inst->index);
        for (const auto& e : d.population()) {
          REQUIRE(e.creationStep() == inst->index + 1);
          REQUIRE(e.prequential().count() == 0);
          REQUIRE(e.accuracy() == 0.0);
        }
        for (std::size_t k = 0; k < d.detectorCount(); ++k) CHECK((d.detector(k).level() == DriftLevel::stable));
      }
    }
    CHECK(reactions == d.driftLog().size());
    CHECK(reactions > 0);
  }
}

TEST_CASE("reactToDrift: DDM buffers train every new ensemble, ADWIN does not") {
  const Schema schema = Schema::numericOnly(2, 2);
  std::vector<Instance> buffer;
  for (std::uint64_t t = 0; t < 50; ++t) buffer.push_back(Instance{{t * 0.01, 1.0 - t * 0.01}, static_cast<int>(t % 2), t});

  Desdd ddm(schema, fixed(std::vector<double>(11, 100.0)));
  ddm.reactToDrift(buffer);
  REQUIRE(ddm.population().size() == 11);
  for (const auto& e : ddm.population())
    for (std::size_t m = 0; m < e.size(); ++m) CHECK(e.member(m).trainedCount() >= 50);

  auto adwinCfg = fixed(std::vector<double>(11, 100.0));
  adwinCfg.detector.kind = DetectorKind::adwin;
  Desdd adwin(schema, adwinCfg);
  adwin.reactToDrift(buffer);
  for (const auto& e : adwin.population()) CHECK(e.totalTrainings() == 0);

  // Consecutive reactions are each a full replacement.
  const auto gen = adwin.generation();
  adwin.reactToDrift({});
  adwin.reactToDrift({});
  CHECK(adwin.generation() == gen + 2);
}

TEST_CASE("new generations draw fresh lambdas") {
  const Schema schema = Schema::numericOnly(2, 2);
  Desdd d(schema, DesddConfig{});
  const auto before = d.candidateLambdas();
  d.reactToDrift({});
  CHECK(d.candidateLambdas() != before);
}

TEST_CASE("full determinism of the emitted prediction stream") {
  auto run = [](std::uint64_t seed) {
    auto stream = makeStream(presetSpec("sea_abrupt_noise", 4));
    DesddConfig cfg;
    cfg.seed = seed;
    Desdd d(stream->schema(), cfg);
    std::vector<int> out;
    while (auto inst = stream->next()) out.push_back(d.process(*inst).predicted);
    return std::make_pair(out, d.driftLog());
  };
  const auto a = run(9), b = run(9), c = run(10);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  CHECK(a.first != c.first);
}

TEST_CASE("c = 1 with lambda 1 matches a hand-wired online bagging ensemble with DDM") {
  auto spec = presetSpec("sine1", 12);
  auto s1 = makeStream(spec);
  auto s2 = makeStream(spec);
  DesddConfig cfg;
  cfg.populationSize = 1;
  cfg.lambdaMin = cfg.lambdaMax = 1.0;
  cfg.seed = 33;
  Desdd d(s1->schema(), cfg);

  std::uint64_t generation = 0;
  OnlineBagging oracle(s2->schema(), cfg.learner, cfg.ensembleSize, 1.0, 0, Desdd::ensembleSeed(33, 0, 0));
  Ddm ddm;
  std::size_t drifts = 0;
  while (auto inst = s1->next()) {
    const auto same = *s2->next();
    const int expected = oracle.predict(same.features);
    const auto r = d.process(*inst);
    REQUIRE(r.predicted == expected);
    const auto level = ddm.update(expected == same.label);
    if (level == DriftLevel::warning) ddm.pushWarning(same);
    if (level == DriftLevel::drift) {
      ++drifts;
      const auto buffer = ddm.drain();
      ++generation;
      oracle = OnlineBagging(s2->schema(), cfg.learner, cfg.ensembleSize, 1.0, same.index + 1,
                             Desdd::ensembleSeed(33, generation, 0));
      for (const auto& b : buffer) oracle.train(b);
      ddm.reset();
    } else {
      oracle.train(same);
    }
  }
  CHECK(drifts > 0);  // the rebuild path is exercised
  CHECK(drifts == d.driftLog().size());
}

TEST_CASE("stationary Gauss: no drifts and accuracy above 0.90") {
  StreamSpec spec;
  spec.generatorName = "gauss";
  spec.length = 10000;
  spec.conceptParams = {0.0};
  spec.seed = 8;
  auto stream = makeStream(spec);
  Desdd d(stream->schema(), DesddConfig{});
  std::uint64_t correct = 0;
  while (auto inst = stream->next()) correct += d.process(*inst).predicted == inst->label ? 1 : 0;
  CHECK(d.driftLog().empty());
  CHECK(correct / 10000.0 > 0.90);
}

TEST_CASE("majority trigger waits for more than half the detectors") {
  auto stream = makeStream(presetSpec("sine1", 6));
  DesddConfig any, majority;
  any.trigger = DriftTrigger::anyEnsemble;
  majority.trigger = DriftTrigger::majority;
  Desdd a(stream->schema(), any), m(stream->schema(), majority);
  while (auto inst = stream->next()) {
    a.process(*inst);
    m.process(*inst);
  }
  CHECK(m.detectorCount() == 11);
  CHECK(m.driftLog().size() <= a.driftLog().size());
  CHECK(m.driftLog().size() > 0);
}
