#include "desdd/detectors.hpp"

#include <cmath>
#include <string>

namespace desdd {

std::string_view toString(DriftLevel level) {
  switch (level) {
    case DriftLevel::stable: return "stable";
    case DriftLevel::warning: return "warning";
    case DriftLevel::drift: return "drift";
  }
  return "stable";
}

std::string_view toString(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::ddm: return "ddm";
    case DetectorKind::eddm: return "eddm";
    case DetectorKind::adwin: return "adwin";
  }
  return "ddm";
}

DetectorKind parseDetectorKind(std::string_view text) {
  if (text == "ddm") return DetectorKind::ddm;
  if (text == "eddm") return DetectorKind::eddm;
  if (text == "adwin") return DetectorKind::adwin;
  throw Error("unknown detector '" + std::string(text) + "'");
}

void DetectorConfig::validate() const {
  if (!(adwin.delta > 0.0 && adwin.delta < 1.0)) throw Error("ADWIN delta must lie in (0, 1)");
  if (adwin.maxBuckets < 1) throw Error("ADWIN needs at least one bucket per row");
  if (adwin.clock < 1) throw Error("ADWIN clock must be at least 1");
  if (!(ddm.driftLevel > ddm.warningLevel && ddm.warningLevel > 0.0))
    throw Error("DDM levels must satisfy 0 < warning < drift");
  if (!(eddm.driftRatio < eddm.warningRatio && eddm.warningRatio <= 1.0 && eddm.driftRatio > 0.0))
    throw Error("EDDM ratios must satisfy 0 < beta < alpha <= 1");
  if (warningBufferCapacity < 1) throw Error("warning buffer capacity must be positive");
}

// ---------------------------------------------------------------------------
// DriftDetector

DriftLevel DriftDetector::update(bool wasCorrect) {
  level_ = observe(!wasCorrect);
  if (level_ == DriftLevel::stable) buffer_.clear();
  return level_;
}

void DriftDetector::reset() {
  clearStatistics();
  buffer_.clear();
  level_ = DriftLevel::stable;
}

void DriftDetector::pushWarning(const Instance& instance) {
  if (!hasWarningLevel() || level_ != DriftLevel::warning) return;
  buffer_.push_back(instance);
  while (buffer_.size() > capacity_) buffer_.pop_front();
}

std::vector<Instance> DriftDetector::drain() {
  std::vector<Instance> out(std::make_move_iterator(buffer_.begin()), std::make_move_iterator(buffer_.end()));
  buffer_.clear();
  return out;
}

// ---------------------------------------------------------------------------
// DDM

Ddm::Ddm(DdmParams params, std::size_t bufferCapacity) : DriftDetector(bufferCapacity), params_(params) {}

void Ddm::clearStatistics() {
  n_ = 0;
  p_ = s_ = pMin_ = sMin_ = 0.0;
  haveMin_ = false;
}

DriftLevel Ddm::observe(bool error) {
  ++n_;
  p_ += ((error ? 1.0 : 0.0) - p_) / static_cast<double>(n_);
  s_ = std::sqrt(p_ * (1.0 - p_) / static_cast<double>(n_));
  if (n_ < params_.minInstances) return DriftLevel::stable;

  if (!haveMin_ || p_ + s_ < pMin_ + sMin_) {
    pMin_ = p_;
    sMin_ = s_;
    haveMin_ = true;
  }
  if (p_ + s_ > pMin_ + params_.driftLevel * sMin_) {
    clearStatistics();
    return DriftLevel::drift;
  }
  if (p_ + s_ > pMin_ + params_.warningLevel * sMin_) return DriftLevel::warning;
  return DriftLevel::stable;
}

// ---------------------------------------------------------------------------
// EDDM

Eddm::Eddm(EddmParams params, std::size_t bufferCapacity) : DriftDetector(bufferCapacity), params_(params) {}

void Eddm::clearStatistics() {
  n_ = errors_ = lastErrorAt_ = 0;
  meanDistance_ = m2_ = maxScore_ = 0.0;
}

double Eddm::errorEstimate() const { return n_ > 0 ? static_cast<double>(errors_) / static_cast<double>(n_) : 0.0; }

DriftLevel Eddm::observe(bool error) {
  ++n_;
  // Statistics only move on errors, so a correct prediction keeps the current warning state.
  if (!error) return level() == DriftLevel::warning ? DriftLevel::warning : DriftLevel::stable;

  ++errors_;
  const auto distance = static_cast<double>(n_ - lastErrorAt_);
  lastErrorAt_ = n_;
  const double old = meanDistance_;
  meanDistance_ += (distance - meanDistance_) / static_cast<double>(errors_);
  m2_ += (distance - meanDistance_) * (distance - old);
  const double sd = std::sqrt(m2_ / static_cast<double>(errors_));
  const double score = meanDistance_ + 2.0 * sd;

  if (n_ < params_.minInstances) return DriftLevel::stable;
  if (score > maxScore_) {
    if (errors_ > params_.minErrors) maxScore_ = score;
    return DriftLevel::stable;
  }
  if (errors_ <= params_.minErrors || maxScore_ <= 0.0) return DriftLevel::stable;
  const double ratio = score / maxScore_;
  if (ratio < params_.driftRatio) {
    clearStatistics();
    return DriftLevel::drift;
  }
  if (ratio < params_.warningRatio) return DriftLevel::warning;
  return DriftLevel::stable;
}

// ---------------------------------------------------------------------------
// ADWIN

Adwin::Adwin(AdwinParams params) : DriftDetector(1), params_(params) {}

void Adwin::clearStatistics() {
  rows_.clear();
  width_ = 0;
  total_ = variance_ = 0.0;
  insertions_ = 0;
}

std::size_t Adwin::bucketCount() const {
  std::size_t n = 0;
  for (const auto& row : rows_) n += row.size();
  return n;
}

std::vector<std::uint64_t> Adwin::bucketSizes() const {
  std::vector<std::uint64_t> sizes;
  for (std::size_t i = rows_.size(); i > 0; --i)
    for (std::size_t k = 0; k < rows_[i - 1].size(); ++k) sizes.push_back(std::uint64_t{1} << (i - 1));
  return sizes;
}

void Adwin::insert(double value) {
  ++width_;
  if (width_ > 1) {
    const double prevMean = total_ / static_cast<double>(width_ - 1);
    variance_ += static_cast<double>(width_ - 1) * (value - prevMean) * (value - prevMean) / static_cast<double>(width_);
  }
  total_ += value;
  if (rows_.empty()) rows_.emplace_back();
  rows_[0].push_front(Bucket{value, 0.0});
  compress();
}

void Adwin::compress() {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() <= params_.maxBuckets) break;
    if (i + 1 == rows_.size()) rows_.emplace_back();
    const Bucket b1 = rows_[i].back();
    rows_[i].pop_back();
    const Bucket b2 = rows_[i].back();
    rows_[i].pop_back();
    const auto n = static_cast<double>(std::uint64_t{1} << i);
    const double u1 = b1.sum / n, u2 = b2.sum / n;
    const double inc = n * n * (u1 - u2) * (u1 - u2) / (n + n);
    rows_[i + 1].push_front(Bucket{b1.sum + b2.sum, b1.variance + b2.variance + inc});
  }
}

void Adwin::dropOldest() {
  std::size_t row = rows_.size() - 1;
  while (rows_[row].empty()) --row;
  const Bucket b = rows_[row].back();
  rows_[row].pop_back();
  const auto n1 = static_cast<double>(std::uint64_t{1} << row);
  width_ -= std::uint64_t{1} << row;
  total_ -= b.sum;
  if (width_ > 0) {
    const double u1 = b.sum / n1;
    const double w = static_cast<double>(width_);
    variance_ -= b.variance + n1 * w * (u1 - total_ / w) * (u1 - total_ / w) / (n1 + w);
    if (variance_ < 0.0) variance_ = 0.0;
  } else {
    variance_ = 0.0;
  }
  while (!rows_.empty() && rows_.back().empty()) rows_.pop_back();
}

bool Adwin::cut(std::uint64_t n0, std::uint64_t n1, double u0, double u1) const {
  const auto n = static_cast<double>(width_);
  const double dd = std::log(2.0 * std::log(n) / params_.delta);
  const double v = variance_ / n;
  const auto minLen = static_cast<double>(params_.minSubWindow);
  const double m = 1.0 / (static_cast<double>(n0) - minLen + 1.0) + 1.0 / (static_cast<double>(n1) - minLen + 1.0);
  const double eps = std::sqrt(2.0 * m * v * dd) + 2.0 / 3.0 * dd * m;
  const double diff = u0 / static_cast<double>(n0) - u1 / static_cast<double>(n1);
  return std::fabs(diff) >= eps;
}

// Scans splits from the oldest bucket forward; on the first significant cut
// drops the oldest bucket and reports it.
bool Adwin::shrink() {
  std::uint64_t n0 = 0, n1 = width_;
  double u0 = 0.0, u1 = total_;
  for (std::size_t i = rows_.size(); i > 0; --i) {
    const auto& row = rows_[i - 1];
    const std::uint64_t size = std::uint64_t{1} << (i - 1);
    for (std::size_t k = row.size(); k > 0; --k) {
      if (i == 1 && k == 1) return false;  // the newest bucket alone cannot be W0
      n0 += size;
      n1 -= size;
      u0 += row[k - 1].sum;
      u1 -= row[k - 1].sum;
      if (n0 >= params_.minSubWindow && n1 >= params_.minSubWindow && cut(n0, n1, u0, u1)) {
        dropOldest();
        return true;
      }
    }
  }
  return false;
}

DriftLevel Adwin::observe(bool error) {
  insert(error ? 1.0 : 0.0);
  bool changed = false;
  if (++insertions_ % params_.clock == 0 && width_ > params_.minWindow) {
    while (width_ > params_.minWindow && shrink()) changed = true;
  }
  return changed ? DriftLevel::drift : DriftLevel::stable;
}

std::unique_ptr<DriftDetector> makeDetector(const DetectorConfig& config) {
  config.validate();
  switch (config.kind) {
    case DetectorKind::ddm: return std::make_unique<Ddm>(config.ddm, config.warningBufferCapacity);
    case DetectorKind::eddm: return std::make_unique<Eddm>(config.eddm, config.warningBufferCapacity);
    case DetectorKind::adwin: return std::make_unique<Adwin>(config.adwin);
  }
  throw Error("unknown detector kind");
}

}  // namespace desdd
