#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toponet/dag.hpp"
#include "toponet/data.hpp"
#include "toponet/graphgen.hpp"
#include "toponet/train.hpp"

namespace toponet {

struct DatasetSpec {
  std::string kind = "swiss_roll";  // swiss_roll | s_curve | tabular
  int m = 2700;
  int n_classes = 3;
  int n_reps = 3;
  double sigma = 0.0;
  std::uint64_t seed = 7;
  int train = 1350, val = 675, test = 675;
  std::uint64_t split_seed = 11;
  // Seeded balanced segment->class allocation. The deterministic round-robin
  // alternative (segment_shuffle = false) aligns class boundaries with the
  // manifold period and leaves no coarse structure for early training; at
  // high difficulty every run then stalls at chance until early stopping
  // kills it.
  bool segment_shuffle = true;
  // tabular
  std::string path;
  std::string label_column;
  bool normalize = true;
};

// One experiment definition, parsed from a `key = value` config file
// (schema_version 1). Every output row carries a hash of the canonical
// serialization so results from different configs cannot be mixed.
struct ExperimentConfig {
  int schema_version = 1;
  DatasetSpec dataset;
  std::vector<std::string> families{"ba", "er", "ws-p.5",
                                    "ws-p.7", "ws-p.9", "mlp-h1"};
  int n = 128;
  int l = 732;
  Ordering ordering = Ordering::random;
  std::vector<double> lr_grid{0.03, 0.01, 0.003, 0.001};
  std::vector<int> bs_grid{32, 64};
  std::vector<std::uint64_t> hpo_seeds{0, 1, 2, 3, 4};
  std::vector<std::uint64_t> eval_seeds{100, 101, 102, 103, 104,
                                        105, 106, 107, 108, 109,
                                        110, 111, 112, 113, 114};
  int max_epochs = 500;
  double improvement_eps = 1e-6;
  bool holm = false;

  std::vector<int> sweep_sizes{32, 64, 128};
  std::vector<double> sweep_densities{0.05, 0.09, 0.15};
  double sweep_lr = 0.03;
  int sweep_bs = 64;
  int sweep_runs = 5;

  std::vector<double> robustness_fractions{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  int robustness_trials = 3;

  std::string out_dir = "results";
};

ExperimentConfig parse_config(const std::string& text);       // throws ConfigError
ExperimentConfig load_config(const std::string& path);

// Fixed-order serialization; hashing input and debugging aid.
std::string canonical_config(const ExperimentConfig& cfg);
// FNV-1a 64 over the canonical form, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

Dataset build_dataset(const ExperimentConfig& cfg);
ModelSpec model_spec_for(const ExperimentConfig& cfg,
                         const std::string& family_name, const Dataset& ds);
TrainConfig base_train_config(const ExperimentConfig& cfg);

}  // namespace toponet
