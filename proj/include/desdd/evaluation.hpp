#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "desdd/method.hpp"
#include "desdd/streams.hpp"

namespace desdd {

/// Detection quality against known drift positions.
/// D = matched + FD, MD = drifts - matched, ADR = sum of matched delays / drifts.
struct DetectionReport {
  std::uint64_t detections = 0;       // D
  std::uint64_t falseDetections = 0;  // FD
  std::uint64_t missedDrifts = 0;     // MD
  std::uint64_t matched = 0;
  double averageDelay = 0.0;  // ADR, in instances
  /// Per true drift: the matched detection step, or nullopt when missed.
  std::vector<std::optional<std::uint64_t>> matchedAt;
  std::vector<std::uint64_t> trueDrifts;
};

/// Matches each true drift p_k to the first detection in [p_k, p_{k+1})
/// (the last block runs to the end of the stream). Every other detection,
/// including any before the first drift, is false. Both inputs must be sorted.
DetectionReport scoreDetections(std::span<const std::uint64_t> detections,
                                std::span<const std::uint64_t> trueDrifts, std::uint64_t streamLength);

struct StepRecord {
  std::uint64_t step = 0;
  int predicted = 0;
  int label = 0;
  int selectedIndex = -1;
  double selectedLambda = 0.0;
  DriftLevel signal = DriftLevel::stable;

  bool correct() const { return predicted == label; }
};

/// Per-step trace of a prequential run.
struct RunLog {
  std::vector<StepRecord> steps;
  /// Optional telemetry, one row per step: ambiguity and lambda of every candidate slot.
  std::vector<std::vector<double>> diversity;
  std::vector<std::vector<double>> lambdas;
  std::vector<std::uint64_t> detections;
  double seconds = 0.0;

  double accuracy() const;
};

/// Runs `method` over every instance of `stream` (test-then-train).
RunLog runPrequential(StreamMethod& method, InstanceStream& stream, bool recordDiversity = false);

/// Accuracy of emitted predictions per consecutive window of `batchSize`
/// steps; a trailing partial window is reported with its own size.
std::vector<double> batchAccuracies(const RunLog& log, std::size_t batchSize);

struct SelectionBucket {
  int slot = 0;
  double lambda = 0.0;
  std::uint64_t count = 0;
  /// Ambiguity samples of this candidate while it was in the population (needs telemetry).
  std::vector<double> diversity;
};

/// Selection counts grouped by candidate identity (slot, lambda). When
/// telemetry is present, every candidate that existed appears, selected or not.
std::vector<SelectionBucket> selectionHistogram(const RunLog& log);

void writeRunLogCsv(std::ostream& out, const RunLog& log);
void writeDetectionReportCsv(std::ostream& out, const DetectionReport& report);
void writeDriftMatchesCsv(std::ostream& out, const DetectionReport& report);
void writeBatchAccuraciesCsv(std::ostream& out, const std::vector<double>& batches, std::size_t batchSize,
                             std::uint64_t length);
void writeSelectionHistogramCsv(std::ostream& out, const std::vector<SelectionBucket>& buckets);
void writeDiversityCsv(std::ostream& out, const RunLog& log);

/// Shortest round-trippable-enough decimal for CSV output.
std::string formatNumber(double value);

}  // namespace desdd
