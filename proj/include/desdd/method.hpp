#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "desdd/detectors.hpp"
#include "desdd/instance.hpp"

namespace desdd {

/// Outcome of one test-then-train step.
struct StepResult {
  int predicted = 0;
  DriftLevel signal = DriftLevel::stable;
  /// Population slot that produced the prediction; -1 for methods without selection.
  int selectedIndex = -1;
  double selectedLambda = std::numeric_limits<double>::quiet_NaN();
};

/// A stream classifier driven one labeled instance at a time: predict, then
/// learn from the revealed label.
class StreamMethod {
 public:
  virtual ~StreamMethod() = default;
  virtual StepResult process(const Instance& instance) = 0;
  virtual std::string name() const = 0;
  /// Steps at which the method reacted to a drift signal.
  virtual const std::vector<std::uint64_t>& driftLog() const = 0;
  /// Ambiguity of each candidate ensemble at the last step, if the method has candidates.
  virtual std::span<const double> lastDiversity() const { return {}; }
  /// Diversity level (lambda) of each candidate slot, if any.
  virtual std::vector<double> candidateLambdas() const { return {}; }
};

}  // namespace desdd
