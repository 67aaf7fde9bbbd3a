// Acceptance criteria: one PASS/FAIL line each, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "desdd/harness.hpp"
#include "poisson_gof.hpp"

using namespace desdd;

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// -- 1 ----------------------------------------------------------------------

void prequentialRecurrence() {
  const auto start = Clock::now();
  Rng rng(2024);
  PrequentialAccuracy acc(0);
  std::uint64_t ones = 0;
  double worst = 0.0;
  constexpr std::uint64_t n = 1000000;
  for (std::uint64_t t = 0; t < n; ++t) {
    const bool bit = (rng.nextU64() & 1) != 0;
    ones += bit ? 1 : 0;
    acc.update(bit, t);
    worst = std::max(worst, std::abs(acc.value() - static_cast<double>(ones) / static_cast<double>(t + 1)));
  }
  const double secs = secondsSince(start);
  report(1, worst <= 1e-12 && secs < 1.0, "prequential recurrence equals running mean on 1e6 bits",
         fmt("max |delta| = %.3g (<= 1e-12), %.3f s (< 1 s)", worst, secs));
}

// -- 2 ----------------------------------------------------------------------

void ambiguityBruteForce() {
  Rng rng(7);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int classes = 2 + static_cast<int>(rng.uniformInt(9));  // 2..10
    const std::size_t n = 1 + rng.uniformInt(25);                  // 1..25
    std::vector<int> votes(n);
    for (int& v : votes) v = static_cast<int>(rng.uniformInt(static_cast<std::uint64_t>(classes)));
    // Brute force: plurality by full pairwise counting, lowest class on ties.
    int output = 0, bestCount = -1;
    for (int c = 0; c < classes; ++c) {
      int count = 0;
      for (int v : votes) count += v == c;
      if (count > bestCount) {
        bestCount = count;
        output = c;
      }
    }
    int disagree = 0;
    for (int v : votes) disagree += v != output;
    const double expected = static_cast<double>(disagree) / static_cast<double>(n);
    const int produced = majorityVote(votes, classes);
    if (produced != output || ambiguity(votes, produced) != expected) ++mismatches;
  }
  report(2, mismatches == 0, "ambiguity matches brute-force disagreement on 1000 vote matrices",
         fmt("%d mismatches (exact match required)", mismatches));
}

// -- 3 ----------------------------------------------------------------------

void poissonGoodnessOfFit() {
  std::string detail;
  bool pass = true;
  std::uint64_t seed = 100;
  for (double lambda : {0.001, 1.0, 6.0, 100.0}) {
    const double p = testing::poissonGofPValue(lambda, 100000, seed++);
    pass = pass && p > 0.01;
    detail += fmt("lambda=%g p=%.3f; ", lambda, p);
  }
  report(3, pass, "Poisson sampler chi-square GOF, 1e5 samples per lambda", detail + "(each p > 0.01)");
}

// -- 4 ----------------------------------------------------------------------

void detectorSanity() {
  std::string detail;
  bool pass = true;
  for (DetectorKind kind : {DetectorKind::ddm, DetectorKind::adwin}) {
    int detected = 0, cleanPrefix = 0;
    long worstDelay = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      DetectorConfig cfg;
      cfg.kind = kind;
      auto det = makeDetector(cfg);
      Rng rng(deriveSeed(0xacce, seed));
      bool prefixDrift = false;
      long delay = -1;
      for (long t = 0; t < 2000 && delay < 0; ++t) {
        const double errorRate = t < 1000 ? 0.1 : 0.5;
        if (det->update(rng.uniform() >= errorRate) == DriftLevel::drift) {
          if (t < 1000)
            prefixDrift = true;
          else
            delay = t - 1000;
        }
      }
      if (delay >= 0 && delay <= 300) ++detected;
      worstDelay = std::max(worstDelay, delay < 0 ? 1000 : delay);
      if (!prefixDrift) ++cleanPrefix;
    }
    pass = pass && detected == 30 && cleanPrefix >= 28;
    detail += fmt("%s: %d/30 within 300 (worst delay %ld), %d/30 clean prefixes; ",
                  std::string(toString(kind)).c_str(), detected, worstDelay, cleanPrefix);
  }
  report(4, pass, "DDM and ADWIN detect a 0.1 -> 0.5 error step", detail + "(need 30/30 and >= 28/30)");
}

// -- 5 ----------------------------------------------------------------------

void degenerateDesdd() {
  auto spec = presetSpec("sea_abrupt", 5);
  auto s1 = makeStream(spec);
  auto s2 = makeStream(spec);
  DesddConfig cfg;
  cfg.populationSize = 1;
  cfg.lambdaMin = cfg.lambdaMax = 1.0;
  cfg.seed = 5;
  Desdd method(s1->schema(), cfg);

  // Hand-wired Online Bagging plus the same detector, rebuilt on drift with the same seeds.
  std::uint64_t generation = 0;
  OnlineBagging oracle(s2->schema(), cfg.learner, cfg.ensembleSize, 1.0, 0, Desdd::ensembleSeed(cfg.seed, 0, 0));
  Ddm ddm(cfg.detector.ddm, cfg.detector.warningBufferCapacity);
  std::size_t mismatches = 0, steps = 0, rebuilds = 0;
  while (auto inst = s1->next()) {
    const auto same = *s2->next();
    const int expected = oracle.predict(same.features);
    if (method.process(*inst).predicted != expected) ++mismatches;
    ++steps;
    const auto level = ddm.update(expected == same.label);
    if (level == DriftLevel::warning) ddm.pushWarning(same);
    if (level == DriftLevel::drift) {
      const auto buffer = ddm.drain();
      ++generation;
      ++rebuilds;
      oracle = OnlineBagging(s2->schema(), cfg.learner, cfg.ensembleSize, 1.0, same.index + 1,
                             Desdd::ensembleSeed(cfg.seed, generation, 0));
      for (const auto& b : buffer) oracle.train(b);
      ddm.reset();
    } else {
      oracle.train(same);
    }
  }
  report(5, mismatches == 0 && steps == 10000, "DESDD with c=1, lambda=1 equals direct Online Bagging on SEA",
         fmt("%zu mismatches over %zu instances, %zu detector-driven rebuilds (exact match required)", mismatches,
             steps, rebuilds));
}

// -- 6 to 10 ----------------------------------------------------------------

struct Run {
  ExperimentSummary summary;
  double seconds = 0.0;
};

Run experiment(const std::string& dataset, const std::string& method, std::size_t replications,
               const std::function<void(ExperimentConfig&)>& tweak = {}) {
  ExperimentConfig c;
  selectDataset(c, dataset);
  selectMethod(c, method);
  c.replications = replications;
  c.seed = 1;
  c.outDir.clear();
  if (tweak) tweak(c);
  const auto start = Clock::now();
  Run r;
  r.summary = runExperiment(c);
  r.seconds = secondsSince(start);
  return r;
}

void accuracyBands(Run& sea, Run& sine, Run& gauss) {
  sea = experiment("sea_abrupt", "desdd", 5);
  sine = experiment("sine1", "desdd", 5);
  gauss = experiment("gauss", "desdd", 5);
  struct Target {
    const char* name;
    const Run* run;
    double target;
  };
  bool pass = true;
  std::string detail;
  for (const Target& t : {Target{"SEA abrupt", &sea, 93.24}, Target{"Sine1", &sine, 93.04},
                          Target{"Gauss", &gauss, 86.04}}) {
    const double acc = 100.0 * t.run->summary.meanAccuracy;
    const bool ok = std::abs(acc - t.target) <= 2.0 && t.run->seconds < 120.0;
    pass = pass && ok;
    detail += fmt("%s %.2f (target %.2f +- 2, %.1f s); ", t.name, acc, t.target, t.run->seconds);
  }
  report(6, pass, "DESDD-DDM accuracy bands over 5 replications", detail + "(< 120 s each)");
}

void detectionQuality(const Run& sine, const Run& gauss) {
  bool pass = true;
  std::string detail;
  for (auto [name, run] : {std::pair{"Sine1", &sine}, std::pair{"Gauss", &gauss}}) {
    const auto& d = *run->summary.replications.front().detection;
    pass = pass && d.matched >= 8 && d.falseDetections <= 2;
    detail += fmt("%s D=%llu matched=%llu FD=%llu MD=%llu ADR=%.1f; ", name,
                  static_cast<unsigned long long>(d.detections), static_cast<unsigned long long>(d.matched),
                  static_cast<unsigned long long>(d.falseDetections),
                  static_cast<unsigned long long>(d.missedDrifts), d.averageDelay);
  }
  report(7, pass, "DESDD-DDM detection quality on a single seeded run", detail + "(matched >= 8, FD <= 2)");
}

void orderingAgainstLeveragingBagging(const Run& sine, const Run& gauss) {
  const auto lbSine = experiment("sine1", "leveraging_bagging", 5);
  const auto lbGauss = experiment("gauss", "leveraging_bagging", 5);
  const double ds = 100.0 * sine.summary.meanAccuracy, ls = 100.0 * lbSine.summary.meanAccuracy;
  const double dg = 100.0 * gauss.summary.meanAccuracy, lg = 100.0 * lbGauss.summary.meanAccuracy;
  report(8, ds >= ls + 2.0 && dg >= lg + 2.0, "DESDD-DDM beats Leveraging Bagging by >= 2 points",
         fmt("Sine1 %.2f vs %.2f (margin %.2f); Gauss %.2f vs %.2f (margin %.2f)", ds, ls, ds - ls, dg, lg, dg - lg));
}

void ddmVersusAdwin() {
  const auto ddm = experiment("sea_abrupt_noise", "desdd", 5);
  const auto adwin = experiment("sea_abrupt_noise", "desdd", 5,
                                [](ExperimentConfig& c) { c.desdd.detector.kind = DetectorKind::adwin; });
  const double a = 100.0 * ddm.summary.meanAccuracy, b = 100.0 * adwin.summary.meanAccuracy;
  report(9, a >= b + 5.0, "DESDD-DDM beats DESDD-ADWIN by >= 5 points on SEA abrupt noise",
         fmt("DDM %.2f (D=%llu) vs ADWIN %.2f (D=%llu), margin %.2f", a,
             static_cast<unsigned long long>(ddm.summary.totalD), b,
             static_cast<unsigned long long>(adwin.summary.totalD), a - b));
}

void lambdaProbe() {
  ExperimentConfig c;
  selectDataset(c, "sea_gradual");
  c.replications = 5;
  c.seed = 1;
  c.outDir.clear();
  const auto s = fixedLambdaProbe(c, defaultProbeLambdas());
  std::uint64_t high = 0, total = 0;
  for (const auto& rep : s.replications) {
    for (const auto& step : rep.log.steps) {
      ++total;
      high += step.selectedLambda > 0.1 ? 1 : 0;
    }
  }
  const double share = static_cast<double>(high) / static_cast<double>(total);
  report(10, share >= 0.80, "fixed-lambda probe on SEA gradual selects lambda > 0.1",
         fmt("%.1f%% of %llu selections (need >= 80%%)", 100.0 * share, static_cast<unsigned long long>(total)));
}

}  // namespace

int main() {
  prequentialRecurrence();
  ambiguityBruteForce();
  poissonGoodnessOfFit();
  detectorSanity();
  degenerateDesdd();
  Run sea, sine, gauss;
  accuracyBands(sea, sine, gauss);
  detectionQuality(sine, gauss);
  orderingAgainstLeveragingBagging(sine, gauss);
  ddmVersusAdwin();
  lambdaProbe();
  std::printf("NOTE [11] real-dataset results need the external datasets; file ingestion is covered by the "
              "reader fixtures in unit.streams and unit.harness\n");
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
