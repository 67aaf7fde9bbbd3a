#include "desdd/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace desdd {

DetectionReport scoreDetections(std::span<const std::uint64_t> detections,
                                std::span<const std::uint64_t> trueDrifts, std::uint64_t streamLength) {
  if (!std::is_sorted(detections.begin(), detections.end())) throw Error("detections must be sorted");
  if (std::adjacent_find(trueDrifts.begin(), trueDrifts.end(), std::greater_equal<>()) != trueDrifts.end())
    throw Error("true drifts must be strictly increasing");
  for (auto d : detections)
    if (d >= streamLength) throw Error("detection beyond stream length");
  for (auto p : trueDrifts)
    if (p >= streamLength) throw Error("true drift beyond stream length");

  DetectionReport r;
  r.detections = detections.size();
  r.trueDrifts.assign(trueDrifts.begin(), trueDrifts.end());
  r.matchedAt.assign(trueDrifts.size(), std::nullopt);
  double delaySum = 0.0;
  for (std::size_t k = 0; k < trueDrifts.size(); ++k) {
    const std::uint64_t begin = trueDrifts[k];
    const std::uint64_t end = k + 1 < trueDrifts.size() ? trueDrifts[k + 1] : streamLength;
    const auto it = std::lower_bound(detections.begin(), detections.end(), begin);
    if (it != detections.end() && *it < end) {
      r.matchedAt[k] = *it;
      delaySum += static_cast<double>(*it - begin);
      ++r.matched;
    }
  }
  r.falseDetections = r.detections - r.matched;
  r.missedDrifts = trueDrifts.size() - r.matched;
  r.averageDelay = trueDrifts.empty() ? 0.0 : delaySum / static_cast<double>(trueDrifts.size());
  return r;
}

double RunLog::accuracy() const {
  if (steps.empty()) return 0.0;
  std::uint64_t correct = 0;
  for (const auto& s : steps) correct += s.correct() ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(steps.size());
}

RunLog runPrequential(StreamMethod& method, InstanceStream& stream, bool recordDiversity) {
  RunLog log;
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t step = 0;
  while (auto inst = stream.next()) {
    // A drift replaces the population inside process(), so the candidates
    // that produced this step's votes are captured beforehand.
    if (recordDiversity) log.lambdas.push_back(method.candidateLambdas());
    const StepResult r = method.process(*inst);
    log.steps.push_back(StepRecord{step, r.predicted, inst->label, r.selectedIndex,
                                   std::isnan(r.selectedLambda) ? 0.0 : r.selectedLambda, r.signal});
    if (r.signal == DriftLevel::drift) log.detections.push_back(step);
    if (recordDiversity) {
      const auto div = method.lastDiversity();
      log.diversity.emplace_back(div.begin(), div.end());
    }
    ++step;
  }
  log.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return log;
}

std::vector<double> batchAccuracies(const RunLog& log, std::size_t batchSize) {
  if (batchSize < 1) throw Error("batch size must be at least 1");
  std::vector<double> out;
  for (std::size_t begin = 0; begin < log.steps.size(); begin += batchSize) {
    const std::size_t end = std::min(begin + batchSize, log.steps.size());
    std::size_t correct = 0;
    for (std::size_t i = begin; i < end; ++i) correct += log.steps[i].correct() ? 1 : 0;
    out.push_back(static_cast<double>(correct) / static_cast<double>(end - begin));
  }
  return out;
}

std::vector<SelectionBucket> selectionHistogram(const RunLog& log) {
  std::map<std::pair<int, double>, SelectionBucket> buckets;
  auto bucket = [&](int slot, double lambda) -> SelectionBucket& {
    auto [it, inserted] = buckets.try_emplace({slot, lambda});
    if (inserted) {
      it->second.slot = slot;
      it->second.lambda = lambda;
    }
    return it->second;
  };
  for (std::size_t s = 0; s < log.diversity.size() && s < log.lambdas.size(); ++s) {
    const auto& div = log.diversity[s];
    const auto& lam = log.lambdas[s];
    for (std::size_t i = 0; i < div.size() && i < lam.size(); ++i)
      bucket(static_cast<int>(i), lam[i]).diversity.push_back(div[i]);
  }
  for (const auto& step : log.steps)
    if (step.selectedIndex >= 0) ++bucket(step.selectedIndex, step.selectedLambda).count;

  std::vector<SelectionBucket> out;
  out.reserve(buckets.size());
  for (auto& [key, b] : buckets) out.push_back(std::move(b));
  return out;
}

// ---------------------------------------------------------------------------
// CSV

std::string formatNumber(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

void writeRunLogCsv(std::ostream& out, const RunLog& log) {
  out << "step,predicted,label,correct,selected_index,selected_lambda,signal\n";
  for (const auto& s : log.steps) {
    out << s.step << ',' << s.predicted << ',' << s.label << ',' << (s.correct() ? 1 : 0) << ',' << s.selectedIndex
        << ',' << formatNumber(s.selectedLambda) << ',' << toString(s.signal) << '\n';
  }
}

void writeDetectionReportCsv(std::ostream& out, const DetectionReport& r) {
  out << "D,FD,MD,matched,ADR\n";
  out << r.detections << ',' << r.falseDetections << ',' << r.missedDrifts << ',' << r.matched << ','
      << formatNumber(r.averageDelay) << '\n';
}

void writeDriftMatchesCsv(std::ostream& out, const DetectionReport& r) {
  out << "true_drift,detected_at,delay\n";
  for (std::size_t k = 0; k < r.trueDrifts.size(); ++k) {
    out << r.trueDrifts[k] << ',';
    if (r.matchedAt[k])
      out << *r.matchedAt[k] << ',' << (*r.matchedAt[k] - r.trueDrifts[k]);
    else
      out << ",";
    out << '\n';
  }
}

void writeBatchAccuraciesCsv(std::ostream& out, const std::vector<double>& batches, std::size_t batchSize,
                             std::uint64_t length) {
  out << "batch,start_step,size,accuracy\n";
  for (std::size_t b = 0; b < batches.size(); ++b) {
    const std::uint64_t start = b * batchSize;
    const std::uint64_t size = std::min<std::uint64_t>(batchSize, length - start);
    out << b << ',' << start << ',' << size << ',' << formatNumber(batches[b]) << '\n';
  }
}

void writeSelectionHistogramCsv(std::ostream& out, const std::vector<SelectionBucket>& buckets) {
  out << "slot,lambda,count,diversity_samples,mean_diversity\n";
  for (const auto& b : buckets) {
    double mean = 0.0;
    for (double d : b.diversity) mean += d;
    if (!b.diversity.empty()) mean /= static_cast<double>(b.diversity.size());
    out << b.slot << ',' << formatNumber(b.lambda) << ',' << b.count << ',' << b.diversity.size() << ','
        << formatNumber(mean) << '\n';
  }
}

void writeDiversityCsv(std::ostream& out, const RunLog& log) {
  out << "step,slot,lambda,diversity\n";
  for (std::size_t s = 0; s < log.diversity.size() && s < log.lambdas.size(); ++s) {
    for (std::size_t i = 0; i < log.diversity[s].size() && i < log.lambdas[s].size(); ++i) {
      out << s << ',' << i << ',' << formatNumber(log.lambdas[s][i]) << ',' << formatNumber(log.diversity[s][i])
          << '\n';
    }
  }
}

}  // namespace desdd
