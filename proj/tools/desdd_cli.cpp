#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "desdd/harness.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string dataset;
  std::string method;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications;
  std::optional<std::string> out;  // an explicit empty value disables writing
  std::optional<std::size_t> threads;
  bool printConfig = false;
};

void addCommonFlags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "INI file applied on top of the built-in defaults");
  cmd->add_option("--dataset", f.dataset, "preset or generator name (replaces the [dataset] section)");
  cmd->add_option("--method", f.method, "desdd | ddd | ddm_single | leveraging_bagging");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--replications", f.replications, "number of seeded replications");
  cmd->add_option("--out", f.out, "output directory (empty: write nothing)");
  cmd->add_option("--threads", f.threads, "concurrent replications (0 = all cores)");
  cmd->add_flag("--print-config", f.printConfig, "print the resolved configuration and exit");
}

desdd::ExperimentConfig resolve(const CommonFlags& f) {
  desdd::ExperimentConfig c;
  if (!f.config.empty()) desdd::applyConfigFile(c, f.config);
  if (!f.dataset.empty()) desdd::selectDataset(c, f.dataset);
  if (!f.method.empty()) desdd::selectMethod(c, f.method, "--method");
  if (f.seed) c.seed = *f.seed;
  if (f.replications) {
    if (*f.replications < 1) throw desdd::ConfigError("--replications: at least one replication is required");
    c.replications = *f.replications;
  }
  if (f.out) c.outDir = *f.out;
  if (f.threads) c.threads = *f.threads;
  c.validate();
  return c;
}

void printSummary(const desdd::ExperimentConfig& c, const desdd::ExperimentSummary& s) {
  std::printf("method=%s dataset=%s replications=%zu\n", c.method.c_str(),
              (c.datasetName.empty() ? c.stream.generatorName : c.datasetName).c_str(), c.replications);
  std::printf("accuracy %.2f +- %.2f %%\n", 100.0 * s.meanAccuracy, 100.0 * s.stdAccuracy);
  if (s.hasGroundTruth)
    std::printf("detections D=%llu FD=%llu MD=%llu ADR=%.2f\n", static_cast<unsigned long long>(s.totalD),
                static_cast<unsigned long long>(s.totalFD), static_cast<unsigned long long>(s.totalMD), s.meanADR);
  else
    std::printf("detections D=%llu\n", static_cast<unsigned long long>(s.totalD));
  std::printf("mean seconds %.3f\n", s.meanSeconds);
  if (!c.outDir.empty()) std::printf("artifacts in %s\n", c.outDir.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diversity-driven ensemble selection for drifting data streams"};
  app.require_subcommand(1);

  CommonFlags runFlags;
  auto* run = app.add_subcommand("run", "run seeded replications and write CSV artifacts");
  addCommonFlags(run, runFlags);

  CommonFlags probeFlags;
  std::vector<double> lambdas = desdd::defaultProbeLambdas();
  auto* probe = app.add_subcommand("probe-lambda", "DESDD with a fixed lambda grid; records selection and diversity");
  addCommonFlags(probe, probeFlags);
  probe->add_option("--lambdas", lambdas, "population lambdas")->delimiter(',');

  auto* list = app.add_subcommand("list-generators", "list generators, dataset presets and methods");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      std::cout << "generators:";
      for (const auto& g : desdd::generatorNames()) std::cout << ' ' << g;
      std::cout << "\npresets:";
      for (const auto& p : desdd::presetNames()) std::cout << ' ' << p;
      std::cout << "\nmethods:";
      for (const auto& m : desdd::methodNames()) std::cout << ' ' << m;
      std::cout << '\n';
      return 0;
    }
    const bool probing = probe->parsed();
    const CommonFlags& flags = probing ? probeFlags : runFlags;
    auto config = resolve(flags);
    if (probing) {
      config.method = "desdd";
      config.desdd.fixedLambdas = lambdas;
      config.recordDiversity = true;
    }
    if (flags.printConfig) {
      std::cout << desdd::formatConfig(config);
      return 0;
    }
    const auto summary = probing ? desdd::fixedLambdaProbe(config, lambdas) : desdd::runExperiment(config);
    printSummary(config, summary);
    return 0;
  } catch (const desdd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
