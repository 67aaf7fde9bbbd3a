#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "desdd/instance.hpp"

namespace desdd {

/// Weighted running mean and variance (West/Welford update).
class GaussianEstimator {
 public:
  void add(double value, double weight = 1.0);

  double weight() const { return weight_; }
  double mean() const { return mean_; }
  /// Sample variance; zero until more than one unit of weight is seen.
  double variance() const { return weight_ > 1.0 ? m2_ / (weight_ - 1.0) : 0.0; }
  double stdDev() const;
  double pdf(double x) const;
  /// P(X <= x) under the fitted normal. Degenerate spread gives a step.
  double cdf(double x) const;

  static constexpr double kVarianceFloor = 1e-9;

 private:
  double weight_ = 0.0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// naiveBayesAdaptive: each leaf uses whichever of majority class and naive
/// Bayes has been right more often on the instances it has seen (ties to naive Bayes).
enum class LeafPrediction { majorityClass, naiveBayes, naiveBayesAdaptive };
enum class LearnerKind { hoeffdingTree, naiveBayes };

struct HoeffdingTreeConfig {
  double splitConfidence = 1e-7;
  std::uint32_t gracePeriod = 200;
  double tieThreshold = 0.05;
  LeafPrediction leafPrediction = LeafPrediction::naiveBayesAdaptive;
  /// Candidate thresholds per numeric attribute, spread evenly over the observed range.
  int numSplitPoints = 10;
  /// A split needs at least two branches each holding this fraction of the leaf weight.
  double minBranchFraction = 0.01;

  void validate() const;
};

struct LearnerConfig {
  LearnerKind kind = LearnerKind::hoeffdingTree;
  HoeffdingTreeConfig tree;

  void validate() const { tree.validate(); }
};

/// Hoeffding bound sqrt(R^2 ln(1/delta) / (2n)).
double hoeffdingBound(double range, double delta, double n);

/// Entropy in bits of an unnormalised class distribution.
double entropy(std::span<const double> dist);

/// Information gain of splitting `pre` into `branches`; -infinity when fewer
/// than two branches carry `minBranchFraction` of the weight.
double informationGain(std::span<const double> pre, const std::vector<std::vector<double>>& branches,
                       double minBranchFraction);

/// Incremental classifier trained one instance at a time (test-then-train).
class OnlineLearner {
 public:
  explicit OnlineLearner(const Schema& schema);
  virtual ~OnlineLearner() = default;

  /// Class with the highest score; ties go to the lowest index. Untrained learners answer 0.
  virtual int predict(std::span<const double> features) const = 0;

  /// Trains on `instance` as if it had been presented `weight` times.
  void train(const Instance& instance, std::uint32_t weight = 1);

  virtual std::unique_ptr<OnlineLearner> clone() const = 0;

  int numClasses() const { return schema_.numClasses(); }
  std::uint64_t trainedCount() const { return trainedCount_; }
  const Schema& schema() const { return schema_; }

 protected:
  virtual void trainImpl(const Instance& instance, double weight) = 0;
  void checkDimension(std::span<const double> features) const;

  Schema schema_;
  std::uint64_t trainedCount_ = 0;
};

class GaussianNaiveBayes final : public OnlineLearner {
 public:
  explicit GaussianNaiveBayes(const Schema& schema);

  int predict(std::span<const double> features) const override;
  std::unique_ptr<OnlineLearner> clone() const override { return std::make_unique<GaussianNaiveBayes>(*this); }

  double prior(int cls) const;
  const GaussianEstimator& estimator(int cls, std::size_t attribute) const {
    return numeric_[static_cast<std::size_t>(cls)][attribute];
  }
  /// Per-class log joint score used by predict.
  std::vector<double> logScores(std::span<const double> features) const;

 private:
  void trainImpl(const Instance& instance, double weight) override;

  std::vector<double> classWeight_;
  double totalWeight_ = 0.0;
  std::vector<std::vector<GaussianEstimator>> numeric_;                // [class][attribute]
  std::vector<std::vector<std::vector<double>>> nominalCounts_;        // [class][attribute][value]
};

/// VFDT with Gaussian-approximation observers on numeric attributes and
/// multiway splits on nominal ones.
class HoeffdingTree final : public OnlineLearner {
 public:
  HoeffdingTree(const Schema& schema, HoeffdingTreeConfig config = {});

  int predict(std::span<const double> features) const override;
  std::unique_ptr<OnlineLearner> clone() const override { return std::make_unique<HoeffdingTree>(*this); }

  std::size_t nodeCount() const { return nodes_.size(); }
  std::size_t leafCount() const;
  std::size_t depth() const;
  const HoeffdingTreeConfig& config() const { return config_; }

 private:
  struct NumericObserver {
    std::vector<GaussianEstimator> perClass;
    std::vector<double> minValue, maxValue;
  };
  struct NominalObserver {
    std::vector<std::vector<double>> counts;  // [value][class]
  };
  struct LeafStats {
    std::vector<double> classCounts;
    std::vector<NumericObserver> numeric;   // indexed by attribute; empty for nominal ones
    std::vector<NominalObserver> nominal;   // indexed by attribute; empty for numeric ones
    double weightSeen = 0.0;
    double weightAtLastCheck = 0.0;
    double majorityCorrect = 0.0;
    double naiveBayesCorrect = 0.0;
  };
  struct Node {
    int splitAttribute = -1;  // -1 for leaves
    double threshold = 0.0;   // numeric splits: value <= threshold goes to child 0
    std::vector<std::size_t> children;
    LeafStats stats;
    std::size_t depth = 0;
    bool isLeaf() const { return splitAttribute < 0; }
  };
  struct SplitCandidate {
    int attribute = -1;
    double threshold = 0.0;
    double merit = 0.0;
    std::vector<std::vector<double>> branches;
  };

  void trainImpl(const Instance& instance, double weight) override;
  std::size_t route(std::span<const double> features) const;
  LeafStats freshLeaf(std::vector<double> classCounts) const;
  void observe(LeafStats& leaf, const Instance& instance, double weight) const;
  SplitCandidate bestNumericSplit(const LeafStats& leaf, std::size_t attribute) const;
  SplitCandidate nominalSplit(const LeafStats& leaf, std::size_t attribute) const;
  void attemptSplit(std::size_t nodeIndex);
  int leafPredict(const LeafStats& leaf, std::span<const double> features) const;
  int naiveBayesPredict(const LeafStats& leaf, std::span<const double> features) const;

  HoeffdingTreeConfig config_;
  std::vector<Node> nodes_;
};

/// Fresh, untrained learner of the configured kind.
std::unique_ptr<OnlineLearner> makeLearner(const LearnerConfig& config, const Schema& schema);

/// Index of the maximum; ties resolve to the lowest index.
int argmaxLowest(std::span<const double> scores);

}  // namespace desdd
