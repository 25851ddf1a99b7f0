#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toponet/config.hpp"

namespace toponet {

struct RunOptions {
  std::string out_dir;  // overrides cfg.out_dir when non-empty
  int workers = 1;
  bool resume = false;
  bool damage_rescale = false;
  std::string results_csv;  // input override for stats/attributes
  std::string graphs_dir;   // input override for attributes
  std::string models_dir;   // input override for robustness
};

struct CommandSummary {
  int trained = 0;
  int skipped = 0;
  std::vector<std::string> outputs;
};

// One line of results.csv. Training runs are keyed by
// (phase, family, gen_seed, lr, batch_size) for resume-by-key.
struct ResultRow {
  std::string config_hash;
  std::string phase;  // hpo | eval
  std::string family;
  std::uint64_t gen_seed = 0;
  std::uint64_t init_seed = 0;
  double lr = 0.0;
  int batch_size = 0;
  double best_val_loss = 0.0;
  int best_epoch = -1;
  int epochs_run = 0;
  double test_accuracy = 0.0;
  double wall_time_s = 0.0;
};

std::vector<ResultRow> load_results_csv(const std::string& path);

// Emits canonical graph + dag JSON per (family, eval seed).
CommandSummary cmd_generate(const ExperimentConfig& cfg, const RunOptions& opts);

// Grid search + topology evaluation per family, then H-test and pairwise
// U-tests. Writes results.csv, grid.csv, stats.csv, dataset.csv and the
// evaluation-phase model checkpoints.
CommandSummary cmd_experiment(const ExperimentConfig& cfg, const RunOptions& opts);

// Mean accuracy per (N, density) cell at fixed lr/bs. Infeasible cells are
// recorded with status=infeasible instead of aborting the sweep.
CommandSummary cmd_sweep(const ExperimentConfig& cfg, const RunOptions& opts);

// Accuracy-gain curves over the checkpoints in the models directory.
CommandSummary cmd_robustness(const ExperimentConfig& cfg, const RunOptions& opts);

// Attribute vector per dag file, joined with evaluation accuracies when a
// results CSV is available.
CommandSummary cmd_attributes(const ExperimentConfig& cfg, const RunOptions& opts);

// Recomputes the statistical comparison from an existing results CSV.
CommandSummary cmd_stats(const ExperimentConfig& cfg, const RunOptions& opts);

}  // namespace toponet
