#include "toponet/net.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "toponet/errors.hpp"
#include "toponet/rng.hpp"

namespace toponet {

DagNet make_net(const Dag& dag) {
  DagNet net;
  net.dag = dag;
  net.plan = level_partition(dag);
  const int n = dag.n();
  net.n_in = static_cast<int>(dag.inputs.size());
  net.n_out = static_cast<int>(dag.outputs.size());

  net.preds.assign(n, {});
  auto arcs = dag.arcs();
  for (std::size_t i = 0; i < arcs.size(); ++i)
    net.preds[arcs[i].second].push_back({arcs[i].first, static_cast<int>(i)});

  std::vector<char> is_source(n, 0);
  for (int v : dag.inputs) is_source[v] = 1;
  net.sink.assign(n, 0);
  for (int v : dag.outputs) net.sink[v] = 1;

  // Biases follow increasing rank over non-source nodes.
  std::vector<int> by_rank(n);
  for (int v = 0; v < n; ++v) by_rank[dag.rank[v]] = v;
  net.bias_index.assign(n, -1);
  int nb = 0;
  for (int v : by_rank)
    if (!is_source[v]) net.bias_index[v] = nb++;

  for (std::size_t lvl = 1; lvl < net.plan.levels.size(); ++lvl)
    for (int v : net.plan.levels[lvl]) net.exec_order.push_back(v);

  net.mask_slot.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (!is_source[v] && !net.sink[v]) {
      net.mask_slot[v] = static_cast<int>(net.hidden_nodes.size());
      net.hidden_nodes.push_back(v);
    }
  }

  net.weights.assign(arcs.size(), 0.0);
  net.biases.assign(nb, 0.0);
  return net;
}

DagNet init_net(const Dag& dag, std::uint64_t seed) {
  DagNet net = make_net(dag);
  Rng rng(seed);
  // Draw in canonical arc order so initialization is reproducible.
  auto arcs = dag.arcs();
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const double fan_in = static_cast<double>(net.preds[arcs[i].second].size());
    net.weights[i] = rng.normal() / std::sqrt(fan_in);
  }
  return net;
}

int count_params(const DagNet& net) { return net.param_count(); }

DamageMask make_damage_mask(const DagNet& net, double f, int batch,
                            std::uint64_t seed, bool rescale) {
  if (f < 0.0 || f >= 1.0)
    throw InfeasibleError("damage fraction must lie in [0,1)");
  DamageMask mask;
  mask.f = f;
  mask.rescale = rescale;
  mask.batch = batch;
  mask.removable = net.hidden_nodes;
  mask.dropped.assign(static_cast<std::size_t>(batch) * mask.removable.size(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < mask.dropped.size(); ++i)
    mask.dropped[i] = rng.bernoulli(f) ? 1 : 0;
  return mask;
}

void forward(const DagNet& net, const double* x, int batch, NetWorkspace& ws,
             const DamageMask* mask) {
  const int n = net.n();
  if (mask && mask->batch != batch)
    throw InfeasibleError("damage mask batch size mismatch");
  ws.batch = batch;
  ws.act.assign(static_cast<std::size_t>(n) * batch, 0.0);
  ws.logits.assign(static_cast<std::size_t>(batch) * net.n_out, 0.0);

  for (int j = 0; j < net.n_in; ++j) {
    double* a = ws.act.data() + static_cast<std::size_t>(net.dag.inputs[j]) * batch;
    for (int b = 0; b < batch; ++b) a[b] = x[static_cast<std::size_t>(b) * net.n_in + j];
  }

  const double keep_scale =
      (mask && mask->rescale && mask->f < 1.0) ? 1.0 / (1.0 - mask->f) : 1.0;

  for (int v : net.exec_order) {
    double* a = ws.act.data() + static_cast<std::size_t>(v) * batch;
    const double bias = net.biases[net.bias_index[v]];
    for (int b = 0; b < batch; ++b) a[b] = bias;
    for (const auto& [u, wi] : net.preds[v]) {
      const double w = net.weights[wi];
      const double* au = ws.act.data() + static_cast<std::size_t>(u) * batch;
      for (int b = 0; b < batch; ++b) a[b] += w * au[b];
    }
    if (!net.sink[v]) {
      for (int b = 0; b < batch; ++b) a[b] = selu(a[b]);
      if (mask) {
        const int slot = net.mask_slot[v];
        for (int b = 0; b < batch; ++b) {
          if (mask->dropped_at(b, slot))
            a[b] = 0.0;
          else if (mask->rescale)
            a[b] *= keep_scale;
        }
      }
    }
  }

  for (int k = 0; k < net.n_out; ++k) {
    const double* a =
        ws.act.data() + static_cast<std::size_t>(net.dag.outputs[k]) * batch;
    for (int b = 0; b < batch; ++b)
      ws.logits[static_cast<std::size_t>(b) * net.n_out + k] = a[b];
  }
}

std::vector<double> forward_logits(const DagNet& net,
                                   const std::vector<double>& x, int batch,
                                   const DamageMask* mask) {
  if (static_cast<int>(x.size()) != batch * net.n_in)
    throw InfeasibleError("forward: batch shape mismatch");
  NetWorkspace ws;
  forward(net, x.data(), batch, ws, mask);
  return ws.logits;
}

namespace {

// Writes softmax probabilities of one row in place; returns log-sum-exp.
double softmax_row(double* row, int k) {
  double mx = row[0];
  for (int i = 1; i < k; ++i) mx = std::max(mx, row[i]);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) sum += std::exp(row[i] - mx);
  const double lse = mx + std::log(sum);
  for (int i = 0; i < k; ++i) row[i] = std::exp(row[i] - lse);
  return lse;
}

}  // namespace

double ce_loss_from_logits(const std::vector<double>& logits, int batch,
                           int n_out, const int* labels) {
  double loss = 0.0;
  std::vector<double> row(n_out);
  for (int b = 0; b < batch; ++b) {
    const double* z = logits.data() + static_cast<std::size_t>(b) * n_out;
    if (labels[b] < 0 || labels[b] >= n_out)
      throw InfeasibleError("label out of range");
    std::copy(z, z + n_out, row.begin());
    const double lse = softmax_row(row.data(), n_out);
    loss += lse - z[labels[b]];
  }
  return loss / batch;
}

double accuracy_from_logits(const std::vector<double>& logits, int batch,
                            int n_out, const int* labels) {
  int correct = 0;
  for (int b = 0; b < batch; ++b) {
    const double* z = logits.data() + static_cast<std::size_t>(b) * n_out;
    int arg = 0;
    for (int k = 1; k < n_out; ++k)
      if (z[k] > z[arg]) arg = k;
    if (arg == labels[b]) ++correct;
  }
  return static_cast<double>(correct) / batch;
}

double backward_ce(const DagNet& net, NetWorkspace& ws, const int* labels,
                   Gradients& grads) {
  const int n = net.n();
  const int batch = ws.batch;
  grads.resize_like(net);
  ws.delta.assign(static_cast<std::size_t>(n) * batch, 0.0);

  // Softmax + cross-entropy: dL/dz = (p - onehot) / batch.
  double loss = 0.0;
  std::vector<double> row(net.n_out);
  for (int b = 0; b < batch; ++b) {
    const double* z = ws.logits.data() + static_cast<std::size_t>(b) * net.n_out;
    if (labels[b] < 0 || labels[b] >= net.n_out)
      throw InfeasibleError("label out of range");
    std::copy(z, z + net.n_out, row.begin());
    const double lse = softmax_row(row.data(), net.n_out);
    loss += lse - z[labels[b]];
    for (int k = 0; k < net.n_out; ++k) {
      const double g = (row[k] - (labels[b] == k ? 1.0 : 0.0)) / batch;
      ws.delta[static_cast<std::size_t>(net.dag.outputs[k]) * batch + b] = g;
    }
  }
  loss /= batch;

  // Reverse level order. delta[v] holds dL/da_v on entry; convert to dL/ds_v
  // through the activation, then push to bias, weights, predecessors.
  for (auto it = net.exec_order.rbegin(); it != net.exec_order.rend(); ++it) {
    const int v = *it;
    double* dv = ws.delta.data() + static_cast<std::size_t>(v) * batch;
    const double* av = ws.act.data() + static_cast<std::size_t>(v) * batch;
    if (!net.sink[v]) {
      // SELU'(s) = lambda for s > 0, else selu(s) + lambda*alpha; recovered
      // from the stored activation.
      for (int b = 0; b < batch; ++b) {
        const double deriv =
            av[b] > 0 ? kSeluLambda : av[b] + kSeluLambda * kSeluAlpha;
        dv[b] *= deriv;
      }
    }
    double gb = 0.0;
    for (int b = 0; b < batch; ++b) gb += dv[b];
    grads.b[net.bias_index[v]] += gb;
    for (const auto& [u, wi] : net.preds[v]) {
      const double* au = ws.act.data() + static_cast<std::size_t>(u) * batch;
      double* du = ws.delta.data() + static_cast<std::size_t>(u) * batch;
      const double w = net.weights[wi];
      double gw = 0.0;
      for (int b = 0; b < batch; ++b) {
        gw += dv[b] * au[b];
        du[b] += w * dv[b];
      }
      grads.w[wi] += gw;
    }
  }
  return loss;
}

std::string to_json(const DagNet& net) {
  nlohmann::json j;
  j["dag"] = nlohmann::json::parse(to_json(net.dag));
  j["weights"] = net.weights;
  j["biases"] = net.biases;
  j["activation"] = "selu";
  return j.dump();
}

DagNet net_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  if (j.at("activation").get<std::string>() != "selu")
    throw DataError("checkpoint: unsupported activation");
  DagNet net = make_net(dag_from_json(j.at("dag").dump()));
  auto w = j.at("weights").get<std::vector<double>>();
  auto b = j.at("biases").get<std::vector<double>>();
  if (w.size() != net.weights.size() || b.size() != net.biases.size())
    throw DataError("checkpoint: parameter count mismatch");
  net.weights = std::move(w);
  net.biases = std::move(b);
  return net;
}

void save_net(const DagNet& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << to_json(net) << "\n";
}

DagNet load_net(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return net_from_json(text);
}

}  // namespace toponet
