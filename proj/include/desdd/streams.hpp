#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "desdd/instance.hpp"
#include "desdd/rng.hpp"

namespace desdd {

enum class DriftKind { abrupt, gradual };

std::string_view toString(DriftKind kind);
DriftKind parseDriftKind(std::string_view text);

/// Where and how a synthetic stream changes concept.
struct DriftSchedule {
  std::vector<std::uint64_t> driftPositions;
  DriftKind driftKind = DriftKind::abrupt;
  /// Instances over which two concepts are mixed; zero for abrupt drift.
  std::uint64_t gradualWidth = 0;
  /// Probability that an emitted label is replaced by a different class.
  double noiseFraction = 0.0;

  static constexpr std::uint64_t kDefaultGradualWidth = 500;
  /// Sine1 reverses its classes at every drift, so its transitions are kept short.
  static constexpr std::uint64_t kSine1GradualWidth = 50;

  /// Drift at every multiple of `block` strictly inside (0, length).
  static DriftSchedule everyBlock(std::uint64_t length, std::uint64_t block, DriftKind kind,
                                  double noise = 0.0,
                                  std::uint64_t width = kDefaultGradualWidth);

  void validate(std::uint64_t length) const;

  /// Probability that an instance at step t comes from the concept that
  /// starts at `position`. Abrupt: step function; gradual: sigmoid of
  /// width `gradualWidth` centred on the position.
  double newConceptProbability(std::uint64_t t, std::uint64_t position) const;
};

/// Options for delimited-text and ARFF ingestion.
struct FileFormat {
  enum class Kind { delimited, arff };
  Kind kind = Kind::delimited;
  char delimiter = ',';
  bool header = false;
  /// Column holding the class label; negative counts from the end (-1 = last).
  int labelColumn = -1;
  /// Dictionaries for nominal feature columns, keyed by raw column index.
  std::map<int, std::vector<std::string>> nominalColumns;
  /// Class dictionary. When empty, labels must be integers in [0, numClasses).
  std::vector<std::string> classes;
  int numClasses = 0;
};

/// Everything needed to reconstruct a stream deterministically.
struct StreamSpec {
  std::string generatorName;  // agrawal | sea | sine1 | gauss | file
  std::uint64_t length = 10000;
  DriftSchedule schedule;
  /// One scalar per concept: Agrawal function id (1-10), SEA threshold,
  /// or the class-reversal flag (0/1) for sine1 and gauss.
  std::vector<double> conceptParams;
  std::uint64_t seed = 1;
  /// Rejection-sample so classes alternate (agrawal and sea only).
  bool balanceClasses = true;
  std::string path;
  FileFormat format;

  void validate() const;
};

/// Per-concept parameters cycling through the canonical sets
/// (Agrawal 1..10, SEA {8, 9, 7, 9.5}, reversal 0/1 for sine1 and gauss).
std::vector<double> defaultConceptParams(std::string_view generator, std::size_t numConcepts);

/// Named artificial benchmark datasets, e.g. "sea_abrupt", "agrawal_gradual_noise".
std::vector<std::string> presetNames();
StreamSpec presetSpec(std::string_view name, std::uint64_t seed);

std::vector<std::string> generatorNames();

/// Single-pass source of instances.
class InstanceStream {
 public:
  virtual ~InstanceStream() = default;
  virtual const Schema& schema() const = 0;
  /// Next instance, or nullopt at end of stream.
  virtual std::optional<Instance> next() = 0;
};

/// One labeled draw from a fixed concept.
struct Sample {
  std::vector<double> features;
  int label = 0;
};

/// A family of concepts. `conceptId` indexes the stream's conceptParams.
class ConceptGenerator {
 public:
  virtual ~ConceptGenerator() = default;
  virtual const Schema& schema() const = 0;
  virtual Sample sample(Rng& rng, std::size_t conceptId) const = 0;
};

class SeaConcepts final : public ConceptGenerator {
 public:
  explicit SeaConcepts(std::vector<double> thresholds);
  const Schema& schema() const override { return schema_; }
  Sample sample(Rng& rng, std::size_t conceptId) const override;
  int classify(const std::vector<double>& features, std::size_t conceptId) const;

 private:
  Schema schema_;
  std::vector<double> thresholds_;
};

class AgrawalConcepts final : public ConceptGenerator {
 public:
  explicit AgrawalConcepts(std::vector<double> functions);
  const Schema& schema() const override { return schema_; }
  Sample sample(Rng& rng, std::size_t conceptId) const override;
  /// Evaluates classification function `function` (1-10) on a feature vector.
  static int classify(const std::vector<double>& features, int function);

 private:
  Schema schema_;
  std::vector<int> functions_;
};

/// Points uniform on the unit square; class 1 below the curve x2 = sin(x1).
/// Each reversed concept swaps the two classes.
class Sine1Concepts final : public ConceptGenerator {
 public:
  explicit Sine1Concepts(std::vector<double> reversed);
  const Schema& schema() const override { return schema_; }
  Sample sample(Rng& rng, std::size_t conceptId) const override;
  int classify(const std::vector<double>& features, std::size_t conceptId) const;
  /// Decision curve height at x1.
  static double boundary(double x1);

 private:
  Schema schema_;
  std::vector<bool> reversed_;
};

/// Two unit-variance Gaussian classes centred at (2,2) and (5,5).
/// Each reversed concept swaps which class owns which component.
class GaussConcepts final : public ConceptGenerator {
 public:
  explicit GaussConcepts(std::vector<double> reversed);
  const Schema& schema() const override { return schema_; }
  Sample sample(Rng& rng, std::size_t conceptId) const override;

  static constexpr double kMeans[2][2] = {{2.0, 2.0}, {5.0, 5.0}};

 private:
  Schema schema_;
  std::vector<bool> reversed_;
};

/// Synthetic stream: concept schedule, gradual mixing, balancing and label noise
/// layered on top of a ConceptGenerator.
class SyntheticStream final : public InstanceStream {
 public:
  SyntheticStream(std::unique_ptr<ConceptGenerator> generator, const StreamSpec& spec);

  const Schema& schema() const override { return generator_->schema(); }
  std::optional<Instance> next() override;

  /// Concept index that generated the last emitted instance.
  std::size_t lastConcept() const { return lastConcept_; }
  /// Label of the last instance before noise was applied.
  int lastCleanLabel() const { return lastCleanLabel_; }
  const ConceptGenerator& generator() const { return *generator_; }
  std::uint64_t length() const { return length_; }

 private:
  std::size_t pickConcept(std::uint64_t t);

  std::unique_ptr<ConceptGenerator> generator_;
  DriftSchedule schedule_;
  std::uint64_t length_;
  bool balance_;
  Rng sampleRng_;
  Rng mixRng_;
  Rng noiseRng_;
  std::uint64_t t_ = 0;
  int nextBalancedClass_ = 0;
  std::size_t lastConcept_ = 0;
  int lastCleanLabel_ = 0;
};

std::unique_ptr<SyntheticStream> makeAgrawal(const StreamSpec& spec);
std::unique_ptr<SyntheticStream> makeSEA(const StreamSpec& spec);
std::unique_ptr<SyntheticStream> makeSine1(const StreamSpec& spec);
std::unique_ptr<SyntheticStream> makeGauss(const StreamSpec& spec);

/// Reads comma/tab separated rows one at a time.
class DelimitedFileStream final : public InstanceStream {
 public:
  DelimitedFileStream(const std::string& path, FileFormat format);
  const Schema& schema() const override { return schema_; }
  std::optional<Instance> next() override;

 private:
  Instance parseRow(const std::vector<std::string>& fields);

  std::ifstream in_;
  std::string path_;
  FileFormat format_;
  Schema schema_;
  std::size_t numColumns_ = 0;
  std::size_t labelColumn_ = 0;
  std::optional<std::string> pending_;
  std::uint64_t lineNo_ = 0;
  std::uint64_t t_ = 0;
};

/// Reads the dense ARFF subset: @relation, numeric/nominal @attribute lines, @data.
/// The last attribute is the class.
class ArffFileStream final : public InstanceStream {
 public:
  explicit ArffFileStream(const std::string& path);
  const Schema& schema() const override { return schema_; }
  std::optional<Instance> next() override;

 private:
  std::ifstream in_;
  std::string path_;
  Schema schema_;
  std::uint64_t lineNo_ = 0;
  std::uint64_t t_ = 0;
};

std::unique_ptr<InstanceStream> readDelimitedDataset(const std::string& path, const FileFormat& format);

/// Builds any stream named by a spec (synthetic generators or "file").
std::unique_ptr<InstanceStream> makeStream(const StreamSpec& spec);

}  // namespace desdd
