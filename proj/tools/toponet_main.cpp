// toponet: feedforward networks on complex graph topologies.
//
// Subcommands: generate | experiment | sweep | robustness | attributes | stats
// Every command takes a config file and writes CSV/JSON artifacts under the
// output directory; reruns with --resume skip already-computed runs.

#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "toponet/errors.hpp"
#include "toponet/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGeneration = 3;
constexpr int kExitTraining = 4;

int dispatch(const std::string& command, const std::string& config_path,
             const toponet::RunOptions& opts) {
  using namespace toponet;
  try {
    const ExperimentConfig cfg = load_config(config_path);
    CommandSummary summary;
    if (command == "generate")
      summary = cmd_generate(cfg, opts);
    else if (command == "experiment")
      summary = cmd_experiment(cfg, opts);
    else if (command == "sweep")
      summary = cmd_sweep(cfg, opts);
    else if (command == "robustness")
      summary = cmd_robustness(cfg, opts);
    else if (command == "attributes")
      summary = cmd_attributes(cfg, opts);
    else if (command == "stats")
      summary = cmd_stats(cfg, opts);
    std::cout << command << ": " << summary.trained << " runs, "
              << summary.skipped << " skipped\n";
    for (const auto& path : summary.outputs) std::cout << "  " << path << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InfeasibleError& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return kExitGeneration;
  } catch (const RetriesExhaustedError& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return kExitGeneration;
  } catch (const NotConvergedError& e) {
    std::cerr << "generation error: " << e.what() << "\n";
    return kExitGeneration;
  } catch (const TrainError& e) {
    std::cerr << "training error: " << e.what() << "\n";
    return kExitTraining;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"feedforward neural networks on complex graph topologies"};
  app.require_subcommand(1);

  std::string config_path;
  toponet::RunOptions opts;
  opts.workers = static_cast<int>(std::thread::hardware_concurrency());
  if (opts.workers < 1) opts.workers = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "output directory (overrides config)");
    sub->add_option("--workers", opts.workers, "parallel training workers");
    sub->add_flag("--resume", opts.resume, "skip runs already present in the output CSVs");
  };

  add_common(app.add_subcommand("generate", "emit graph and dag JSON files"));
  add_common(app.add_subcommand(
      "experiment", "grid search, topology evaluation and statistics"));
  add_common(app.add_subcommand("sweep", "size/density accuracy surface"));

  auto* robustness =
      app.add_subcommand("robustness", "node-removal accuracy-gain curves");
  add_common(robustness);
  robustness->add_option("--models", opts.models_dir,
                         "model checkpoint directory (default <out>/models)");
  robustness->add_flag("--damage-rescale", opts.damage_rescale,
                       "rescale surviving activations by 1/(1-f)");

  auto* attributes =
      app.add_subcommand("attributes", "topological attribute table");
  add_common(attributes);
  attributes->add_option("--graphs", opts.graphs_dir,
                         "dag directory (default <out>/dags)");
  attributes->add_option("--results", opts.results_csv,
                         "results CSV for the accuracy join");

  auto* stats = app.add_subcommand("stats", "recompute H-test and U-tests");
  add_common(stats);
  stats->add_option("--results", opts.results_csv,
                    "results CSV (default <out>/results.csv)");

  CLI11_PARSE(app, argc, argv);
  return dispatch(app.get_subcommands().front()->get_name(), config_path, opts);
}
