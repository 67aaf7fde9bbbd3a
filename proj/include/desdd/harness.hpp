#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "desdd/baselines.hpp"
#include "desdd/desdd.hpp"
#include "desdd/evaluation.hpp"
#include "desdd/streams.hpp"

namespace desdd {

/// Configuration problem; the message names the offending key path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

std::vector<std::string> methodNames();

struct ExperimentConfig {
  /// Preset or generator name; empty when the stream is described field by field.
  std::string datasetName = "sea_abrupt";
  /// Resolved stream; its seed is replaced per replication.
  StreamSpec stream = presetSpec("sea_abrupt", 1);
  /// Ground truth for file streams, which carry no schedule of their own.
  std::vector<std::uint64_t> fileDrifts;

  std::string method = "desdd";
  DesddConfig desdd;
  LeveragingBaggingConfig leveragingBagging;
  DddConfig ddd;
  LearnerConfig learner;

  std::size_t replications = 1;
  std::uint64_t seed = 1;
  std::filesystem::path outDir = "results";
  std::size_t batchSize = 30;
  bool recordDiversity = false;
  /// Concurrent replications; 0 picks the hardware concurrency.
  std::size_t threads = 0;

  void validate() const;
  /// Drift positions used to score detections, or nullopt when unknown.
  std::optional<std::vector<std::uint64_t>> groundTruth() const;
};

/// Replaces the stream with the named preset or a default-scheduled generator.
void selectDataset(ExperimentConfig& config, std::string_view name);
/// Checks and stores a method name; `keyPath` names the source in errors.
void selectMethod(ExperimentConfig& config, std::string_view name, std::string_view keyPath = "method.name");

/// Applies an INI document ([experiment], [dataset], [method], [detector],
/// [learner]) on top of `config`.
void applyConfigText(ExperimentConfig& config, std::string_view text);
void applyConfigFile(ExperimentConfig& config, const std::filesystem::path& path);
/// Full INI rendering of `config`; reading it back reproduces the same experiment.
std::string formatConfig(const ExperimentConfig& config);

std::uint64_t replicationSeed(std::uint64_t masterSeed, std::size_t replication);
std::uint64_t streamSeed(std::uint64_t replicationSeed);
std::uint64_t methodSeed(std::uint64_t replicationSeed);

std::unique_ptr<StreamMethod> makeMethod(const ExperimentConfig& config, const Schema& schema, std::uint64_t seed);

struct ReplicationResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  RunLog log;
  std::optional<DetectionReport> detection;
};

struct ExperimentSummary {
  std::vector<ReplicationResult> replications;
  std::vector<double> accuracies;
  double meanAccuracy = 0.0;
  double stdAccuracy = 0.0;  // sample standard deviation; 0 for one replication
  bool hasGroundTruth = false;
  std::uint64_t totalD = 0, totalFD = 0, totalMD = 0;
  double meanADR = 0.0;
  double meanSeconds = 0.0;
};

ReplicationResult runReplication(const ExperimentConfig& config, std::size_t index);

/// Runs every replication and, unless `outDir` is empty, writes per-replication
/// CSVs under rep_NNN/, summary.csv, aggregate.csv, config.ini and timing.csv.
/// Everything except timing.csv is a deterministic function of the config.
ExperimentSummary runExperiment(const ExperimentConfig& config);

/// The population grid used to study which diversity levels get selected.
std::vector<double> defaultProbeLambdas();

/// DESDD with exactly `lambdas` as its population, with diversity telemetry on.
ExperimentSummary fixedLambdaProbe(ExperimentConfig config, const std::vector<double>& lambdas);

}  // namespace desdd
