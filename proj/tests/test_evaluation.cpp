#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "desdd/desdd.hpp"
#include "desdd/evaluation.hpp"
#include "desdd/streams.hpp"

using namespace desdd;

namespace {

const std::vector<std::uint64_t> kDrifts = {1000, 2000, 3000, 4000, 5000, 6000, 7000, 8000, 9000};

RunLog logFromBits(const std::vector<int>& correct) {
  RunLog log;
  for (std::size_t i = 0; i < correct.size(); ++i) log.steps.push_back(StepRecord{i, correct[i] ? 1 : 0, 1});
  return log;
}

/// Always right, always selects slot 1 of two fixed candidates.
class FixedSelection final : public StreamMethod {
 public:
  StepResult process(const Instance& inst) override {
    StepResult r;
    r.predicted = inst.label;
    r.selectedIndex = 1;
    r.selectedLambda = 0.5;
    return r;
  }
  std::string name() const override { return "fixed"; }
  const std::vector<std::uint64_t>& driftLog() const override { return log_; }
  std::span<const double> lastDiversity() const override { return diversity_; }
  std::vector<double> candidateLambdas() const override { return {0.1, 0.5}; }

 private:
  std::vector<std::uint64_t> log_;
  std::vector<double> diversity_ = {0.2, 0.4};
};

}  // namespace

TEST_CASE("scoring: one detection five steps late") {
  const std::vector<std::uint64_t> det = {1005};
  const auto r = scoreDetections(det, kDrifts, 10000);
  CHECK(r.detections == 1);
  CHECK(r.falseDetections == 0);
  CHECK(r.missedDrifts == 8);
  CHECK(r.matched == 1);
  CHECK(r.averageDelay == doctest::Approx(5.0 / 9.0));
  CHECK(r.matchedAt[0] == 1005u);
  CHECK_FALSE(r.matchedAt[1].has_value());
}

TEST_CASE("scoring: no detections") {
  const auto r = scoreDetections({}, kDrifts, 10000);
  CHECK(r.detections == 0);
  CHECK(r.falseDetections == 0);
  CHECK(r.missedDrifts == 9);
  CHECK(r.averageDelay == 0.0);
}

TEST_CASE("scoring: pre-drift and duplicate detections are false") {
  const std::vector<std::uint64_t> det = {500, 1005, 1100};
  const auto r = scoreDetections(det, kDrifts, 10000);
  CHECK(r.detections == 3);
  CHECK(r.falseDetections == 2);
  CHECK(r.missedDrifts == 8);
  CHECK(r.averageDelay == doctest::Approx(5.0 / 9.0));
}

TEST_CASE("scoring: the last block runs to the end of the stream") {
  const std::vector<std::uint64_t> det = {9999};
  const auto r = scoreDetections(det, kDrifts, 10000);
  CHECK(r.matched == 1);
  CHECK(r.matchedAt[8] == 9999u);
  CHECK(r.averageDelay == doctest::Approx(999.0 / 9.0));
}

TEST_CASE("scoring: input validation") {
  const std::vector<std::uint64_t> unsorted = {20, 10};
  CHECK_THROWS_AS(scoreDetections(unsorted, kDrifts, 10000), Error);
  const std::vector<std::uint64_t> repeated = {10, 10};
  CHECK_THROWS_AS(scoreDetections({}, repeated, 10000), Error);
  const std::vector<std::uint64_t> late = {10000};
  CHECK_THROWS_AS(scoreDetections(late, kDrifts, 10000), Error);
}

TEST_CASE("scoring identities hold for random inputs") {
  Rng rng(4);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::uint64_t length = 100 + rng.uniformInt(5000);
    std::vector<std::uint64_t> drifts, det;
    for (std::uint64_t t = 0; t < length; ++t) {
      if (rng.uniform() < 0.003) drifts.push_back(t);
      if (rng.uniform() < 0.004) det.push_back(t);
      if (rng.uniform() < 0.001) det.push_back(t);  // duplicate steps are allowed
    }
    const auto r = scoreDetections(det, drifts, length);
    REQUIRE(r.detections == r.matched + r.falseDetections);
    REQUIRE(r.matched + r.missedDrifts == drifts.size());
    if (r.matched == 0) REQUIRE(r.averageDelay == 0.0);
    // Independent oracle: brute-force scan of each block.
    std::uint64_t matched = 0;
    double delay = 0.0;
    for (std::size_t k = 0; k < drifts.size(); ++k) {
      const std::uint64_t end = k + 1 < drifts.size() ? drifts[k + 1] : length;
      for (auto d : det)
        if (d >= drifts[k] && d < end) {
          ++matched;
          delay += static_cast<double>(d - drifts[k]);
          break;
        }
    }
    REQUIRE(r.matched == matched);
    if (!drifts.empty()) REQUIRE(r.averageDelay == doctest::Approx(delay / static_cast<double>(drifts.size())));
  }
}

TEST_CASE("batch accuracies") {
  const auto all = logFromBits(std::vector<int>(90, 1));
  const auto b = batchAccuracies(all, 30);
  CHECK(b == std::vector<double>{1.0, 1.0, 1.0});
  std::vector<int> alt;
  for (int i = 0; i < 10; ++i) alt.push_back(i % 2);
  for (double v : batchAccuracies(logFromBits(alt), 2)) CHECK(v == 0.5);
  CHECK(batchAccuracies(logFromBits(std::vector<int>(95, 1)), 30).size() == 4);
  CHECK_THROWS_AS(batchAccuracies(all, 0), Error);
}

TEST_CASE("size-weighted batch mean equals the overall accuracy") {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> bits(1 + rng.uniformInt(3000));
    for (int& b : bits) b = rng.uniform() < 0.8 ? 1 : 0;
    const auto log = logFromBits(bits);
    const std::size_t size = 1 + rng.uniformInt(100);
    const auto batches = batchAccuracies(log, size);
    double weighted = 0.0;
    for (std::size_t i = 0; i < batches.size(); ++i) {
      const std::size_t n = std::min(size, bits.size() - i * size);
      weighted += batches[i] * static_cast<double>(n);
    }
    REQUIRE(std::abs(weighted / static_cast<double>(bits.size()) - log.accuracy()) <= 1e-12);
  }
}

TEST_CASE("prequential run log and selection histogram") {
  auto stream = makeStream(presetSpec("sea_abrupt", 2));
  FixedSelection method;
  const auto log = runPrequential(method, *stream, true);
  REQUIRE(log.steps.size() == 10000);
  CHECK(log.accuracy() == 1.0);
  CHECK(log.seconds >= 0.0);
  const auto hist = selectionHistogram(log);
  REQUIRE(hist.size() == 2);  // both candidates appear, only one is ever selected
  CHECK(hist[0].count == 0);
  CHECK(hist[1].count == 10000);
  CHECK(hist[1].lambda == 0.5);
  CHECK(hist[0].diversity.size() == 10000);
  CHECK(hist[0].diversity.front() == 0.2);
}

TEST_CASE("fixed grid: eleven buckets whose counts sum to the stream length") {
  auto stream = makeStream(presetSpec("sea_gradual", 3));
  DesddConfig cfg;
  cfg.fixedLambdas = {0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1, 5, 10, 50, 100};
  Desdd method(stream->schema(), cfg);
  const auto log = runPrequential(method, *stream, true);
  std::uint64_t total = 0;
  std::size_t lambdas = 0;
  std::vector<double> seen;
  for (const auto& b : selectionHistogram(log)) {
    total += b.count;
    if (std::find(seen.begin(), seen.end(), b.lambda) == seen.end()) seen.push_back(b.lambda);
    ++lambdas;
  }
  CHECK(total == 10000);
  CHECK(seen.size() == 11);
  CHECK(lambdas == 11);
}

TEST_CASE("CSV writers use the documented headers") {
  RunLog log = logFromBits({1, 0, 1});
  log.steps[1].selectedIndex = 2;
  log.steps[1].selectedLambda = 0.25;
  log.steps[2].signal = DriftLevel::drift;
  log.lambdas = {{0.1}, {0.1}, {0.1}};
  log.diversity = {{0.0}, {0.5}, {1.0}};

  std::ostringstream runLog, report, matches, batches, hist, div;
  writeRunLogCsv(runLog, log);
  CHECK(runLog.str() ==
        "step,predicted,label,correct,selected_index,selected_lambda,signal\n"
        "0,1,1,1,-1,0,stable\n"
        "1,0,1,0,2,0.25,stable\n"
        "2,1,1,1,-1,0,drift\n");

  const std::vector<std::uint64_t> det = {1005};
  const std::vector<std::uint64_t> drifts = {1000, 2000};
  const auto r = scoreDetections(det, drifts, 3000);
  writeDetectionReportCsv(report, r);
  CHECK(report.str() == "D,FD,MD,matched,ADR\n1,0,1,1,2.5\n");
  writeDriftMatchesCsv(matches, r);
  CHECK(matches.str() == "true_drift,detected_at,delay\n1000,1005,5\n2000,,\n");

  writeBatchAccuraciesCsv(batches, batchAccuracies(log, 2), 2, 3);
  CHECK(batches.str() == "batch,start_step,size,accuracy\n0,0,2,0.5\n1,2,1,1\n");

  writeSelectionHistogramCsv(hist, selectionHistogram(log));
  CHECK(hist.str().rfind("slot,lambda,count,diversity_samples,mean_diversity\n", 0) == 0);

  writeDiversityCsv(div, log);
  CHECK(div.str() == "step,slot,lambda,diversity\n0,0,0.1,0\n1,0,0.1,0.5\n2,0,0.1,1\n");
}
