#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "toponet/dag.hpp"

namespace toponet {

inline constexpr double kSeluLambda = 1.0507009873554805;
inline constexpr double kSeluAlpha = 1.6732632423543772;

inline double selu(double x) {
  return x > 0 ? kSeluLambda * x : kSeluLambda * kSeluAlpha * (std::exp(x) - 1.0);
}

// Trainable network over a Dag: one weight per arc (canonical arc order) and
// one bias per non-source node (increasing rank order). Hidden nodes apply
// SELU, sinks are identity. Structure tables are derived once at build time.
struct DagNet {
  Dag dag;
  LevelPlan plan;
  std::vector<double> weights;
  std::vector<double> biases;

  int n_in = 0;
  int n_out = 0;
  // Non-source nodes in level order; within a level nodes are independent.
  std::vector<int> exec_order;
  std::vector<std::vector<std::pair<int, int>>> preds;  // node -> (pred, weight idx)
  std::vector<int> bias_index;                          // node -> biases idx, -1 for sources
  std::vector<char> sink;                               // node -> identity activation
  std::vector<int> hidden_nodes;
  std::vector<int> mask_slot;  // node -> slot in DamageMask::removable, -1

  int n() const { return dag.n(); }
  int param_count() const {
    return static_cast<int>(weights.size() + biases.size());
  }
};

// Structure only; parameters zeroed.
DagNet make_net(const Dag& dag);

// LeCun-style init: w_uv ~ Normal(0, 1/fan_in(v)), biases 0.
DagNet init_net(const Dag& dag, std::uint64_t seed);

int count_params(const DagNet& net);

// Per-sample Bernoulli(f) removal of hidden nodes; inputs and outputs are
// never masked. A masked node's activation is forced to exactly 0. With
// `rescale`, surviving hidden activations are scaled by 1/(1-f) (training-
// mode dropout semantics); default is plain removal.
struct DamageMask {
  double f = 0.0;
  bool rescale = false;
  int batch = 0;
  std::vector<int> removable;
  std::vector<std::uint8_t> dropped;  // batch x removable.size(), sample-major

  bool dropped_at(int sample, int slot) const {
    return dropped[static_cast<std::size_t>(sample) * removable.size() + slot] != 0;
  }
};

DamageMask make_damage_mask(const DagNet& net, double f, int batch,
                            std::uint64_t seed, bool rescale = false);

// Reusable buffers for forward/backward over a batch.
struct NetWorkspace {
  int batch = 0;
  std::vector<double> act;     // node-major [n][batch]
  std::vector<double> delta;   // node-major [n][batch]
  std::vector<double> logits;  // row-major [batch][n_out]
};

// x is row-major [batch][n_in]; fills ws.act and ws.logits.
void forward(const DagNet& net, const double* x, int batch, NetWorkspace& ws,
             const DamageMask* mask = nullptr);

// Convenience wrapper returning the logits.
std::vector<double> forward_logits(const DagNet& net,
                                   const std::vector<double>& x, int batch,
                                   const DamageMask* mask = nullptr);

struct Gradients {
  std::vector<double> w, b;
  void resize_like(const DagNet& net) {
    w.assign(net.weights.size(), 0.0);
    b.assign(net.biases.size(), 0.0);
  }
};

// Mean softmax cross-entropy over the batch.
double ce_loss_from_logits(const std::vector<double>& logits, int batch,
                           int n_out, const int* labels);

// Fraction of samples whose argmax logit equals the label (ties resolve to
// the lowest class id).
double accuracy_from_logits(const std::vector<double>& logits, int batch,
                            int n_out, const int* labels);

// Exact reverse traversal of the level plan; requires a preceding unmasked
// forward() on ws. Overwrites grads and returns the loss.
double backward_ce(const DagNet& net, NetWorkspace& ws, const int* labels,
                   Gradients& grads);

// Checkpoint: {"dag": {...}, "weights": [...], "biases": [...],
//              "activation": "selu"}
std::string to_json(const DagNet& net);
DagNet net_from_json(const std::string& text);
void save_net(const DagNet& net, const std::string& path);
DagNet load_net(const std::string& path);

}  // namespace toponet
