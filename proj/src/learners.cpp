#include "desdd/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace desdd {

// ---------------------------------------------------------------------------
// GaussianEstimator

void GaussianEstimator::add(double value, double weight) {
  if (weight <= 0.0) return;
  if (weight_ <= 0.0) {
    weight_ = weight;
    mean_ = value;
    m2_ = 0.0;
    return;
  }
  weight_ += weight;
  const double last = mean_;
  mean_ += weight * (value - last) / weight_;
  m2_ += weight * (value - last) * (value - mean_);
}

double GaussianEstimator::stdDev() const { return std::sqrt(std::max(variance(), kVarianceFloor)); }

double GaussianEstimator::pdf(double x) const {
  if (weight_ <= 0.0) return 0.0;
  const double sd = stdDev();
  const double z = (x - mean_) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

double GaussianEstimator::cdf(double x) const {
  if (weight_ <= 0.0) return 0.0;
  const double var = variance();
  if (var <= kVarianceFloor) return x >= mean_ ? 1.0 : 0.0;
  return 0.5 * std::erfc(-(x - mean_) / (std::sqrt(var) * std::numbers::sqrt2));
}

// ---------------------------------------------------------------------------
// Split heuristics

void HoeffdingTreeConfig::validate() const {
  if (!(splitConfidence > 0.0 && splitConfidence < 1.0)) throw Error("split confidence must lie in (0, 1)");
  if (gracePeriod < 1) throw Error("grace period must be at least 1");
  if (!(tieThreshold >= 0.0)) throw Error("tie threshold must be non-negative");
  if (numSplitPoints < 1) throw Error("need at least one numeric split point");
  if (!(minBranchFraction >= 0.0 && minBranchFraction < 0.5)) throw Error("min branch fraction must lie in [0, 0.5)");
}

double hoeffdingBound(double range, double delta, double n) {
  return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * n));
}

double entropy(std::span<const double> dist) {
  double total = 0.0;
  for (double w : dist) total += w;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double w : dist) {
    if (w > 0.0) {
      const double p = w / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

double informationGain(std::span<const double> pre, const std::vector<std::vector<double>>& branches,
                       double minBranchFraction) {
  double total = 0.0;
  for (double w : pre) total += w;
  if (total <= 0.0) return -std::numeric_limits<double>::infinity();
  int heavy = 0;
  double post = 0.0;
  for (const auto& b : branches) {
    double bw = 0.0;
    for (double w : b) bw += w;
    if (bw > minBranchFraction * total) ++heavy;
    post += bw / total * entropy(b);
  }
  if (heavy < 2) return -std::numeric_limits<double>::infinity();
  return entropy(pre) - post;
}

int argmaxLowest(std::span<const double> scores) {
  int best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  return best;
}

// ---------------------------------------------------------------------------
// OnlineLearner

OnlineLearner::OnlineLearner(const Schema& schema) : schema_(schema) {
  if (schema_.numClasses() < 1) throw Error("a learner needs at least one class");
}

void OnlineLearner::checkDimension(std::span<const double> features) const {
  if (features.size() != schema_.dimension())
    throw Error("feature dimension " + std::to_string(features.size()) + " does not match schema dimension " +
                std::to_string(schema_.dimension()));
}

void OnlineLearner::train(const Instance& instance, std::uint32_t weight) {
  checkDimension(instance.features);
  if (instance.label < 0 || instance.label >= numClasses()) throw Error("class label out of range");
  if (weight == 0) return;
  trainImpl(instance, static_cast<double>(weight));
  trainedCount_ += weight;
}

// ---------------------------------------------------------------------------
// GaussianNaiveBayes

GaussianNaiveBayes::GaussianNaiveBayes(const Schema& schema) : OnlineLearner(schema) {
  const auto k = static_cast<std::size_t>(numClasses());
  classWeight_.assign(k, 0.0);
  numeric_.assign(k, std::vector<GaussianEstimator>(schema_.dimension()));
  nominalCounts_.resize(k);
  for (auto& perClass : nominalCounts_) {
    perClass.resize(schema_.dimension());
    for (std::size_t a = 0; a < schema_.dimension(); ++a)
      if (schema_.attributes[a].isNominal()) perClass[a].assign(schema_.attributes[a].numValues(), 0.0);
  }
}

void GaussianNaiveBayes::trainImpl(const Instance& inst, double weight) {
  const auto c = static_cast<std::size_t>(inst.label);
  classWeight_[c] += weight;
  totalWeight_ += weight;
  for (std::size_t a = 0; a < schema_.dimension(); ++a) {
    if (schema_.attributes[a].isNominal()) {
      const auto v = static_cast<std::size_t>(inst.features[a]);
      if (v < nominalCounts_[c][a].size()) nominalCounts_[c][a][v] += weight;
    } else {
      numeric_[c][a].add(inst.features[a], weight);
    }
  }
}

double GaussianNaiveBayes::prior(int cls) const {
  return totalWeight_ > 0.0 ? classWeight_[static_cast<std::size_t>(cls)] / totalWeight_ : 0.0;
}

std::vector<double> GaussianNaiveBayes::logScores(std::span<const double> features) const {
  const double minusInf = -std::numeric_limits<double>::infinity();
  std::vector<double> scores(static_cast<std::size_t>(numClasses()), minusInf);
  for (std::size_t c = 0; c < scores.size(); ++c) {
    if (classWeight_[c] <= 0.0) continue;
    double s = std::log(classWeight_[c] / totalWeight_);
    for (std::size_t a = 0; a < schema_.dimension(); ++a) {
      const Attribute& attr = schema_.attributes[a];
      if (attr.isNominal()) {
        const auto v = static_cast<std::size_t>(features[a]);
        const double count = v < attr.numValues() ? nominalCounts_[c][a][v] : 0.0;
        s += std::log((count + 1.0) / (classWeight_[c] + static_cast<double>(attr.numValues())));
      } else {
        const GaussianEstimator& g = numeric_[c][a];
        const double var = std::max(g.variance(), GaussianEstimator::kVarianceFloor);
        const double d = features[a] - g.mean();
        s += -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
      }
    }
    scores[c] = s;
  }
  return scores;
}

int GaussianNaiveBayes::predict(std::span<const double> features) const {
  if (trainedCount_ == 0) return 0;
  checkDimension(features);
  const auto scores = logScores(features);
  return argmaxLowest(scores);
}

// ---------------------------------------------------------------------------
// HoeffdingTree

HoeffdingTree::HoeffdingTree(const Schema& schema, HoeffdingTreeConfig config)
    : OnlineLearner(schema), config_(config) {
  config_.validate();
  nodes_.push_back(Node{-1, 0.0, {}, freshLeaf(std::vector<double>(static_cast<std::size_t>(numClasses()), 0.0)), 0});
}

HoeffdingTree::LeafStats HoeffdingTree::freshLeaf(std::vector<double> classCounts) const {
  LeafStats leaf;
  const auto k = static_cast<std::size_t>(numClasses());
  leaf.classCounts = std::move(classCounts);
  leaf.numeric.resize(schema_.dimension());
  leaf.nominal.resize(schema_.dimension());
  for (std::size_t a = 0; a < schema_.dimension(); ++a) {
    const Attribute& attr = schema_.attributes[a];
    if (attr.isNominal()) {
      leaf.nominal[a].counts.assign(attr.numValues(), std::vector<double>(k, 0.0));
    } else {
      leaf.numeric[a].perClass.assign(k, GaussianEstimator{});
      leaf.numeric[a].minValue.assign(k, std::numeric_limits<double>::infinity());
      leaf.numeric[a].maxValue.assign(k, -std::numeric_limits<double>::infinity());
    }
  }
  return leaf;
}

std::size_t HoeffdingTree::route(std::span<const double> features) const {
  std::size_t idx = 0;
  while (!nodes_[idx].isLeaf()) {
    const Node& n = nodes_[idx];
    const auto a = static_cast<std::size_t>(n.splitAttribute);
    if (schema_.attributes[a].isNominal()) {
      auto v = static_cast<std::size_t>(std::max(0.0, features[a]));
      v = std::min(v, n.children.size() - 1);
      idx = n.children[v];
    } else {
      idx = n.children[features[a] <= n.threshold ? 0 : 1];
    }
  }
  return idx;
}

void HoeffdingTree::observe(LeafStats& leaf, const Instance& inst, double weight) const {
  const auto c = static_cast<std::size_t>(inst.label);
  leaf.classCounts[c] += weight;
  leaf.weightSeen += weight;
  for (std::size_t a = 0; a < schema_.dimension(); ++a) {
    const double x = inst.features[a];
    if (schema_.attributes[a].isNominal()) {
      const auto v = static_cast<std::size_t>(x);
      if (v < leaf.nominal[a].counts.size()) leaf.nominal[a].counts[v][c] += weight;
    } else {
      NumericObserver& o = leaf.numeric[a];
      o.perClass[c].add(x, weight);
      o.minValue[c] = std::min(o.minValue[c], x);
      o.maxValue[c] = std::max(o.maxValue[c], x);
    }
  }
}

void HoeffdingTree::trainImpl(const Instance& inst, double weight) {
  const std::size_t leafIdx = route(inst.features);
  LeafStats& leaf = nodes_[leafIdx].stats;
  if (config_.leafPrediction == LeafPrediction::naiveBayesAdaptive) {
    if (argmaxLowest(leaf.classCounts) == inst.label) leaf.majorityCorrect += weight;
    if (naiveBayesPredict(leaf, inst.features) == inst.label) leaf.naiveBayesCorrect += weight;
  }
  observe(leaf, inst, weight);
  if (leaf.weightSeen - leaf.weightAtLastCheck >= static_cast<double>(config_.gracePeriod)) {
    attemptSplit(leafIdx);
  }
}

HoeffdingTree::SplitCandidate HoeffdingTree::bestNumericSplit(const LeafStats& leaf, std::size_t attribute) const {
  const NumericObserver& o = leaf.numeric[attribute];
  const auto k = static_cast<std::size_t>(numClasses());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    if (o.perClass[c].weight() <= 0.0) continue;
    lo = std::min(lo, o.minValue[c]);
    hi = std::max(hi, o.maxValue[c]);
  }
  SplitCandidate best;
  best.attribute = static_cast<int>(attribute);
  best.merit = -std::numeric_limits<double>::infinity();
  if (!(hi > lo)) return best;

  const int points = config_.numSplitPoints;
  for (int i = 1; i <= points; ++i) {
    const double split = lo + (hi - lo) * i / (points + 1);
    std::vector<std::vector<double>> branches(2, std::vector<double>(k, 0.0));
    for (std::size_t c = 0; c < k; ++c) {
      const GaussianEstimator& g = o.perClass[c];
      const double w = g.weight();
      if (w <= 0.0) continue;
      double left;
      if (split < o.minValue[c])
        left = 0.0;
      else if (split >= o.maxValue[c])
        left = w;
      else
        left = w * g.cdf(split);
      branches[0][c] = left;
      branches[1][c] = w - left;
    }
    const double merit = informationGain(leaf.classCounts, branches, config_.minBranchFraction);
    if (merit > best.merit) {
      best.merit = merit;
      best.threshold = split;
      best.branches = std::move(branches);
    }
  }
  return best;
}

HoeffdingTree::SplitCandidate HoeffdingTree::nominalSplit(const LeafStats& leaf, std::size_t attribute) const {
  SplitCandidate cand;
  cand.attribute = static_cast<int>(attribute);
  cand.branches = leaf.nominal[attribute].counts;
  cand.merit = informationGain(leaf.classCounts, cand.branches, config_.minBranchFraction);
  return cand;
}

void HoeffdingTree::attemptSplit(std::size_t nodeIndex) {
  LeafStats& leaf = nodes_[nodeIndex].stats;
  leaf.weightAtLastCheck = leaf.weightSeen;

  int nonZero = 0;
  for (double w : leaf.classCounts) nonZero += w > 0.0 ? 1 : 0;
  if (nonZero < 2) return;

  std::vector<SplitCandidate> candidates;
  for (std::size_t a = 0; a < schema_.dimension(); ++a)
    candidates.push_back(schema_.attributes[a].isNominal() ? nominalSplit(leaf, a) : bestNumericSplit(leaf, a));
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const SplitCandidate& x, const SplitCandidate& y) { return x.merit > y.merit; });

  const double best = candidates.front().merit;
  if (!(best > 0.0)) return;
  // Not splitting is always an option with merit zero.
  const double second = candidates.size() > 1 ? std::max(candidates[1].merit, 0.0) : 0.0;
  const double range = std::log2(std::max(numClasses(), 2));
  const double eps = hoeffdingBound(range, config_.splitConfidence, leaf.weightSeen);
  if (!(best - second > eps || eps < config_.tieThreshold)) return;

  SplitCandidate chosen = std::move(candidates.front());
  const std::size_t childDepth = nodes_[nodeIndex].depth + 1;
  std::vector<std::size_t> children;
  for (auto& dist : chosen.branches) {
    children.push_back(nodes_.size());
    nodes_.push_back(Node{-1, 0.0, {}, freshLeaf(std::move(dist)), childDepth});
  }
  Node& n = nodes_[nodeIndex];
  n.splitAttribute = chosen.attribute;
  n.threshold = chosen.threshold;
  n.children = std::move(children);
  n.stats = LeafStats{};
}

int HoeffdingTree::naiveBayesPredict(const LeafStats& leaf, std::span<const double> features) const {
  if (!(leaf.weightSeen > 0.0)) return argmaxLowest(leaf.classCounts);
  const auto k = static_cast<std::size_t>(numClasses());
  double total = 0.0;
  for (double w : leaf.classCounts) total += w;
  std::vector<double> scores(k, -std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < k; ++c) {
    if (leaf.classCounts[c] <= 0.0) continue;
    double s = std::log(leaf.classCounts[c] / total);
    for (std::size_t a = 0; a < schema_.dimension(); ++a) {
      const Attribute& attr = schema_.attributes[a];
      if (attr.isNominal()) {
        const auto v = static_cast<std::size_t>(features[a]);
        double count = 0.0, classTotal = 0.0;
        for (std::size_t j = 0; j < attr.numValues(); ++j) classTotal += leaf.nominal[a].counts[j][c];
        if (v < attr.numValues()) count = leaf.nominal[a].counts[v][c];
        s += std::log((count + 1.0) / (classTotal + static_cast<double>(attr.numValues())));
      } else {
        const GaussianEstimator& g = leaf.numeric[a].perClass[c];
        if (g.weight() <= 0.0) continue;
        s += std::log(std::max(g.pdf(features[a]), std::numeric_limits<double>::min()));
      }
    }
    scores[c] = s;
  }
  return argmaxLowest(scores);
}

int HoeffdingTree::leafPredict(const LeafStats& leaf, std::span<const double> features) const {
  switch (config_.leafPrediction) {
    case LeafPrediction::majorityClass:
      return argmaxLowest(leaf.classCounts);
    case LeafPrediction::naiveBayes:
      return naiveBayesPredict(leaf, features);
    case LeafPrediction::naiveBayesAdaptive:
      return leaf.majorityCorrect > leaf.naiveBayesCorrect ? argmaxLowest(leaf.classCounts)
                                                           : naiveBayesPredict(leaf, features);
  }
  return argmaxLowest(leaf.classCounts);
}

int HoeffdingTree::predict(std::span<const double> features) const {
  if (trainedCount_ == 0) return 0;
  checkDimension(features);
  return leafPredict(nodes_[route(features)].stats, features);
}

std::size_t HoeffdingTree::leafCount() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.isLeaf(); }));
}

std::size_t HoeffdingTree::depth() const {
  std::size_t d = 0;
  for (const Node& n : nodes_) d = std::max(d, n.depth);
  return d;
}

std::unique_ptr<OnlineLearner> makeLearner(const LearnerConfig& config, const Schema& schema) {
  config.validate();
  if (config.kind == LearnerKind::naiveBayes) return std::make_unique<GaussianNaiveBayes>(schema);
  return std::make_unique<HoeffdingTree>(schema, config.tree);
}

}  // namespace desdd
