#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <string_view>
#include <vector>

#include "desdd/instance.hpp"

namespace desdd {

enum class DriftLevel { stable, warning, drift };

std::string_view toString(DriftLevel level);

enum class DetectorKind { ddm, eddm, adwin };

std::string_view toString(DetectorKind kind);
DetectorKind parseDetectorKind(std::string_view text);

struct DdmParams {
  std::uint64_t minInstances = 30;
  double warningLevel = 2.0;
  double driftLevel = 3.0;
};

struct EddmParams {
  double warningRatio = 0.95;  // alpha
  double driftRatio = 0.90;    // beta
  std::uint64_t minErrors = 30;
  std::uint64_t minInstances = 30;
};

struct AdwinParams {
  double delta = 0.002;
  std::size_t maxBuckets = 5;
  /// Each sub-window must hold at least this many bits before a cut is tested.
  std::uint64_t minSubWindow = 5;
  /// Cuts are only tested once the whole window is longer than this.
  std::uint64_t minWindow = 10;
  /// Cuts are tested on every `clock`-th insertion.
  std::uint64_t clock = 1;
};

struct DetectorConfig {
  DetectorKind kind = DetectorKind::ddm;
  DdmParams ddm;
  EddmParams eddm;
  AdwinParams adwin;
  std::size_t warningBufferCapacity = 1000;

  void validate() const;
};

/// Error-monitoring drift detector. Each update consumes one prediction
/// outcome and yields exactly one level. Detectors with a warning level keep
/// the instances pushed while in warning until drift drains them; a return
/// to stable discards them.
class DriftDetector {
 public:
  explicit DriftDetector(std::size_t bufferCapacity) : capacity_(bufferCapacity) {}
  virtual ~DriftDetector() = default;

  DriftLevel update(bool wasCorrect);
  void reset();

  DriftLevel level() const { return level_; }
  virtual bool hasWarningLevel() const = 0;
  /// Current estimate of the monitored error rate.
  virtual double errorEstimate() const = 0;
  virtual std::unique_ptr<DriftDetector> clone() const = 0;

  /// Retains `instance` if the detector is currently in warning; oldest
  /// entries are dropped past capacity.
  void pushWarning(const Instance& instance);
  std::vector<Instance> drain();
  std::size_t bufferSize() const { return buffer_.size(); }

 protected:
  virtual DriftLevel observe(bool error) = 0;
  virtual void clearStatistics() = 0;

 private:
  std::size_t capacity_;
  std::deque<Instance> buffer_;
  DriftLevel level_ = DriftLevel::stable;
};

/// Drift Detection Method: running error rate p with s = sqrt(p(1-p)/i),
/// warning at p+s > pMin + 2 sMin and drift at p+s > pMin + 3 sMin.
class Ddm final : public DriftDetector {
 public:
  explicit Ddm(DdmParams params = {}, std::size_t bufferCapacity = 1000);

  bool hasWarningLevel() const override { return true; }
  double errorEstimate() const override { return p_; }
  std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<Ddm>(*this); }

  std::uint64_t count() const { return n_; }
  double p() const { return p_; }
  double s() const { return s_; }
  double pMin() const { return pMin_; }
  double sMin() const { return sMin_; }

 private:
  DriftLevel observe(bool error) override;
  void clearStatistics() override;

  DdmParams params_;
  std::uint64_t n_ = 0;
  double p_ = 0.0;
  double s_ = 0.0;
  double pMin_ = 0.0;
  double sMin_ = 0.0;
  bool haveMin_ = false;
};

/// Early Drift Detection Method: monitors distance between consecutive errors.
class Eddm final : public DriftDetector {
 public:
  explicit Eddm(EddmParams params = {}, std::size_t bufferCapacity = 1000);

  bool hasWarningLevel() const override { return true; }
  double errorEstimate() const override;
  std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<Eddm>(*this); }

 private:
  DriftLevel observe(bool error) override;
  void clearStatistics() override;

  EddmParams params_;
  std::uint64_t n_ = 0;
  std::uint64_t errors_ = 0;
  std::uint64_t lastErrorAt_ = 0;
  double meanDistance_ = 0.0;
  double m2_ = 0.0;
  double maxScore_ = 0.0;
};

/// ADWIN with an exponential-histogram window of the error bits.
class Adwin final : public DriftDetector {
 public:
  explicit Adwin(AdwinParams params = {});

  bool hasWarningLevel() const override { return false; }
  double errorEstimate() const override { return windowMean(); }
  std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<Adwin>(*this); }

  std::uint64_t windowLength() const { return width_; }
  double windowSum() const { return total_; }
  double windowMean() const { return width_ > 0 ? total_ / static_cast<double>(width_) : 0.0; }
  std::size_t bucketCount() const;
  /// Bucket sizes ordered oldest first; their sum equals windowLength().
  std::vector<std::uint64_t> bucketSizes() const;

 private:
  struct Bucket {
    double sum = 0.0;
    double variance = 0.0;
  };

  DriftLevel observe(bool error) override;
  void clearStatistics() override;
  void insert(double value);
  void compress();
  bool shrink();
  void dropOldest();
  bool cut(std::uint64_t n0, std::uint64_t n1, double u0, double u1) const;

  AdwinParams params_;
  /// rows_[i] holds buckets of 2^i bits, newest at the front.
  std::vector<std::deque<Bucket>> rows_;
  std::uint64_t insertions_ = 0;
  std::uint64_t width_ = 0;
  double total_ = 0.0;
  double variance_ = 0.0;
};

std::unique_ptr<DriftDetector> makeDetector(const DetectorConfig& config);

}  // namespace desdd
