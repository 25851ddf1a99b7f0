#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toponet/data.hpp"
#include "toponet/graphgen.hpp"
#include "toponet/net.hpp"

namespace toponet {

struct TrainConfig {
  double lr = 0.01;
  int batch_size = 64;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double scheduler_factor = 0.5;
  int scheduler_patience = 10;   // epochs without val improvement before lr drop
  int early_stop_patience = 15;  // epochs without val improvement before stop
  int max_epochs = 500;
  double improvement_eps = 1e-6;  // strict decrease below best counts as improvement
  std::uint64_t seed = 0;         // mini-batch shuffling
};

// Provenance and outcome of one training run. Scalar fields go to the results
// CSV; the per-epoch curves stay in memory for inspection and tests.
struct RunRecord {
  std::string family;
  std::uint64_t gen_seed = 0;
  std::uint64_t init_seed = 0;
  double lr = 0.0;
  int batch_size = 0;
  double best_val_loss = 0.0;
  int best_epoch = -1;  // 0-based index into val_curve
  double test_accuracy = 0.0;
  int epochs_run = 0;
  double wall_time_s = 0.0;
  std::vector<double> val_curve;
  std::vector<double> lr_curve;
};

struct Adam {
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  int t = 0;
  std::vector<double> mw, vw, mb, vb;

  explicit Adam(const DagNet& net, double b1 = 0.9, double b2 = 0.999,
                double e = 1e-8)
      : beta1(b1),
        beta2(b2),
        eps(e),
        mw(net.weights.size(), 0.0),
        vw(net.weights.size(), 0.0),
        mb(net.biases.size(), 0.0),
        vb(net.biases.size(), 0.0) {}

  void step(DagNet& net, const Gradients& g, double lr);
};

double evaluate_loss(const DagNet& net, const SplitView& view);
double evaluate_accuracy(const DagNet& net, const SplitView& view);

// Cross-entropy minimization with Adam, a plateau scheduler (factor 0.5) and
// early stopping; the parameters from the best-validation epoch are restored
// before returning. Throws TrainError on non-finite loss.
RunRecord train(DagNet& net, const Dataset& ds, const TrainConfig& cfg);

// Everything needed to instantiate one model of a family.
struct ModelSpec {
  FamilySpec family;
  int n = 0;
  int l = 0;
  int n_in = 0;
  int n_out = 0;
  Ordering ordering = Ordering::random;
};

// graph -> dag -> initialized net. The multipartite family reuses its
// canonical layered dag every time, so runs differ only in initialization.
DagNet build_model(const ModelSpec& spec, std::uint64_t gen_seed,
                   std::uint64_t init_seed);

struct GridCell {
  double lr = 0.0;
  int batch_size = 0;
  double median_val_loss = 0.0;
};

struct GridSearchResult {
  double best_lr = 0.0;
  int best_batch_size = 0;
  std::vector<GridCell> cells;
  std::vector<RunRecord> runs;
};

// Index of the cell minimizing median validation loss; ties broken by lower
// lr, then lower batch size.
int select_best_cell(const std::vector<GridCell>& cells);

// Trains one model per (lr, bs, seed); per cell the median of the seeds'
// best validation losses decides.
GridSearchResult grid_search(const ModelSpec& spec, const Dataset& ds,
                             const std::vector<double>& lr_grid,
                             const std::vector<int>& bs_grid,
                             const std::vector<std::uint64_t>& seeds,
                             const TrainConfig& base, int workers = 1);

struct EvalResult {
  std::vector<RunRecord> runs;
  std::vector<double> accuracies;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  std::vector<DagNet> nets;  // populated when keep_nets
};

// Fresh models on `seeds` (disjoint from the HPO seeds by convention) at the
// tuned hyperparameters.
EvalResult evaluate_topology(const ModelSpec& spec, const Dataset& ds,
                             double lr, int batch_size,
                             const std::vector<std::uint64_t>& seeds,
                             const TrainConfig& base, int workers = 1,
                             bool keep_nets = false);

}  // namespace toponet
