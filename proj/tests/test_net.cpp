#include <cmath>
#include <numeric>

#include "doctest.h"
#include "toponet/errors.hpp"
#include "toponet/graphgen.hpp"
#include "toponet/net.hpp"
#include "toponet/rng.hpp"

using namespace toponet;

TEST_SUITE_BEGIN("net");

namespace {

DagNet single_arc_net() {
  UGraph g;
  g.n = 2;
  g.edges = {{0, 1}};
  g.family = "test";
  DagNet net = make_net(orient(g, Ordering::natural, 0));
  net.weights = {1.0};
  net.biases = {0.0};
  return net;
}

DagNet chain_net() {
  UGraph g;
  g.n = 3;
  g.edges = {{0, 1}, {1, 2}};
  g.family = "test";
  DagNet net = make_net(orient(g, Ordering::natural, 0));
  net.weights = {1.0, 1.0};
  net.biases = {0.0, 0.0};
  return net;
}

DagNet random_mlp_net(std::uint64_t seed) {
  DagNet net = init_net(orient(gen_mlp({3, 122, 3}), Ordering::natural, 0), seed);
  Rng rng(derive_seed(seed, 99));
  for (auto& b : net.biases) b = rng.normal(0.0, 0.1);
  return net;
}

// Dense two-matrix reference for the [3,122,3] multipartite net. Parameters
// are read back off the arc list, so only the execution strategy differs.
std::vector<double> dense_reference(const DagNet& net,
                                    const std::vector<double>& x, int batch) {
  double w1[3][122] = {};
  double w2[122][3] = {};
  double b1[122] = {};
  double b2[3] = {};
  auto arcs = net.dag.arcs();
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    auto [u, v] = arcs[i];
    if (u < 3)
      w1[u][v - 3] = net.weights[i];
    else
      w2[u - 3][v - 125] = net.weights[i];
  }
  for (int h = 0; h < 122; ++h) b1[h] = net.biases[net.bias_index[3 + h]];
  for (int k = 0; k < 3; ++k) b2[k] = net.biases[net.bias_index[125 + k]];

  std::vector<double> out(static_cast<std::size_t>(batch) * 3);
  for (int b = 0; b < batch; ++b) {
    const double* xi = x.data() + static_cast<std::size_t>(b) * 3;
    double h[122];
    for (int j = 0; j < 122; ++j) {
      double s = b1[j];
      for (int i = 0; i < 3; ++i) s += xi[i] * w1[i][j];
      h[j] = selu(s);
    }
    for (int k = 0; k < 3; ++k) {
      double s = b2[k];
      for (int j = 0; j < 122; ++j) s += h[j] * w2[j][k];
      out[static_cast<std::size_t>(b) * 3 + k] = s;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("forward: zero input through a single arc gives zero") {
  DagNet net = single_arc_net();
  auto logits = forward_logits(net, {0.0}, 1);
  CHECK(logits[0] == 0.0);  // selu(0) = 0, identity sink
}

TEST_CASE("forward: selu constants through a chain") {
  DagNet net = chain_net();
  auto logits = forward_logits(net, {1.0}, 1);
  CHECK(logits[0] == doctest::Approx(kSeluLambda).epsilon(1e-15));
  auto neg = forward_logits(net, {-1.0}, 1);
  const double expected = kSeluLambda * kSeluAlpha * (std::exp(-1.0) - 1.0);
  CHECK(neg[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("forward: layered execution matches the dense reference") {
  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    DagNet net = random_mlp_net(seed);
    const int batch = 8;
    std::vector<double> x(batch * 3);
    for (auto& v : x) v = rng.uniform();
    auto fast = forward_logits(net, x, batch);
    auto dense = dense_reference(net, x, batch);
    for (std::size_t i = 0; i < fast.size(); ++i)
      CHECK(fast[i] == doctest::Approx(dense[i]).epsilon(1e-10));
  }
}

TEST_CASE("loss: equal logits on 3 classes cost ln 3") {
  DagNet net = init_net(orient(gen_mlp({3, 4, 3}), Ordering::natural, 0), 1);
  for (auto& w : net.weights) w = 0.0;
  std::vector<int> labels{0, 1, 2};
  auto logits = forward_logits(net, std::vector<double>(9, 0.5), 3);
  for (double z : logits) CHECK(z == 0.0);
  CHECK(ce_loss_from_logits(logits, 3, 3, labels.data()) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("backward: zero net sink bias gradients are softmax minus onehot") {
  DagNet net = init_net(orient(gen_mlp({3, 4, 3}), Ordering::natural, 0), 1);
  for (auto& w : net.weights) w = 0.0;
  NetWorkspace ws;
  std::vector<double> x{0.3, 0.7, 0.2};
  std::vector<int> y{1};
  forward(net, x.data(), 1, ws);
  Gradients g;
  const double loss = backward_ce(net, ws, y.data(), g);
  CHECK(loss == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  for (int k = 0; k < 3; ++k) {
    const double expect = 1.0 / 3.0 - (k == 1 ? 1.0 : 0.0);
    CHECK(g.b[net.bias_index[7 + k]] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("backward: analytic gradients match central finite differences") {
  Rng rng(11);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    UGraph g = gen_er(12, 24, seed);
    Dag dag = make_dag(g, Ordering::random, 3, 3, seed);
    DagNet net = init_net(dag, seed + 50);
    for (auto& b : net.biases) b = rng.normal(0.0, 0.2);

    const int batch = 5;
    std::vector<double> x(batch * 3);
    for (auto& v : x) v = rng.uniform();
    std::vector<int> y(batch);
    for (auto& label : y) label = static_cast<int>(rng.uniform_index(3));

    NetWorkspace ws;
    forward(net, x.data(), batch, ws);
    Gradients grads;
    backward_ce(net, ws, y.data(), grads);

    auto loss_at = [&]() {
      auto logits = forward_logits(net, x, batch);
      return ce_loss_from_logits(logits, batch, 3, y.data());
    };
    const double h = 1e-5;
    auto check_param = [&](double& param, double analytic) {
      const double orig = param;
      param = orig + h;
      const double up = loss_at();
      param = orig - h;
      const double down = loss_at();
      param = orig;
      const double fd = (up - down) / (2 * h);
      const double denom = std::max({std::abs(analytic), std::abs(fd), 1e-6});
      CHECK(std::abs(analytic - fd) / denom <= 1e-4);
    };
    for (std::size_t i = 0; i < net.weights.size(); ++i)
      check_param(net.weights[i], grads.w[i]);
    for (std::size_t i = 0; i < net.biases.size(); ++i)
      check_param(net.biases[i], grads.b[i]);
  }
}

TEST_CASE("count_params: arcs plus non-source biases") {
  DagNet mlp = make_net(orient(gen_mlp({3, 122, 3}), Ordering::natural, 0));
  CHECK(count_params(mlp) == 857);  // 732 + 122 + 3
  CHECK(count_params(single_arc_net()) == 2);
  DagNet ba = make_net(make_dag(gen_ba(128, 732, 0), Ordering::random, 3, 3, 0));
  CHECK(count_params(ba) == 857);  // same budget as the multipartite reference
}

TEST_CASE("init: lecun scaling, zero biases, seed determinism") {
  // Star into one node: fan_in 400, so weights should have sd 0.05.
  UGraph g;
  g.n = 401;
  for (int i = 0; i < 400; ++i) g.edges.push_back({i, 400});
  g.family = "test";
  canonicalize(g);
  DagNet net = init_net(orient(g, Ordering::natural, 0), 4);
  const double mean =
      std::accumulate(net.weights.begin(), net.weights.end(), 0.0) /
      net.weights.size();
  double var = 0.0;
  for (double w : net.weights) var += (w - mean) * (w - mean);
  const double sd = std::sqrt(var / net.weights.size());
  CHECK(sd == doctest::Approx(1.0 / 20.0).epsilon(0.15));
  for (double b : net.biases) CHECK(b == 0.0);

  DagNet again = init_net(orient(g, Ordering::natural, 0), 4);
  CHECK(again.weights == net.weights);
}

TEST_CASE("mask: f=0 is a bitwise no-op") {
  DagNet net = random_mlp_net(3);
  std::vector<double> x(4 * 3, 0.25);
  DamageMask mask = make_damage_mask(net, 0.0, 4, 123);
  auto masked = forward_logits(net, x, 4, &mask);
  auto plain = forward_logits(net, x, 4);
  CHECK(masked == plain);
}

TEST_CASE("mask: removable set excludes inputs and outputs") {
  DagNet net = random_mlp_net(3);
  DamageMask mask = make_damage_mask(net, 0.3, 2, 5);
  for (int v : mask.removable) {
    for (int in : net.dag.inputs) CHECK(v != in);
    for (int out : net.dag.outputs) CHECK(v != out);
  }
  CHECK(mask.removable.size() == 122);
}

TEST_CASE("mask: dropping every hidden node leaves only sink biases") {
  DagNet net = random_mlp_net(7);
  DamageMask mask = make_damage_mask(net, 0.5, 1, 5);
  std::fill(mask.dropped.begin(), mask.dropped.end(), 1);
  auto logits = forward_logits(net, {0.9, 0.1, 0.4}, 1, &mask);
  for (int k = 0; k < 3; ++k)
    CHECK(logits[k] == net.biases[net.bias_index[125 + k]]);
}

TEST_CASE("mask: rescale multiplies survivors by 1/(1-f)") {
  DagNet net = chain_net();
  DamageMask mask;
  mask.f = 0.5;
  mask.rescale = true;
  mask.batch = 1;
  mask.removable = {1};
  mask.dropped = {0};
  auto scaled = forward_logits(net, {1.0}, 1, &mask);
  CHECK(scaled[0] == doctest::Approx(2.0 * kSeluLambda).epsilon(1e-12));
}

TEST_CASE("forward: permuting batch rows permutes outputs identically") {
  DagNet net = random_mlp_net(8);
  Rng rng(2);
  const int batch = 6;
  std::vector<double> x(batch * 3);
  for (auto& v : x) v = rng.uniform();
  auto base = forward_logits(net, x, batch);
  std::vector<int> perm{3, 1, 5, 0, 2, 4};
  std::vector<double> shuffled(batch * 3);
  for (int b = 0; b < batch; ++b)
    std::copy(x.begin() + perm[b] * 3, x.begin() + (perm[b] + 1) * 3,
              shuffled.begin() + b * 3);
  auto permuted = forward_logits(net, shuffled, batch);
  for (int b = 0; b < batch; ++b)
    for (int k = 0; k < 3; ++k)
      CHECK(permuted[b * 3 + k] == base[perm[b] * 3 + k]);
}

TEST_CASE("checkpoint: json round-trip preserves behavior bitwise") {
  DagNet net = random_mlp_net(12);
  const std::string text = to_json(net);
  DagNet back = net_from_json(text);
  CHECK(back.weights == net.weights);
  CHECK(back.biases == net.biases);
  std::vector<double> x{0.1, 0.5, 0.9};
  CHECK(forward_logits(back, x, 1) == forward_logits(net, x, 1));
  CHECK(to_json(back) == text);
}

TEST_CASE("forward: shape mismatch is rejected") {
  DagNet net = chain_net();
  CHECK_THROWS_AS(forward_logits(net, {1.0, 2.0, 3.0}, 2), InfeasibleError);
  std::vector<int> bad_label{7};
  auto logits = forward_logits(net, {1.0}, 1);
  CHECK_THROWS_AS(ce_loss_from_logits(logits, 1, 1, bad_label.data()),
                  InfeasibleError);
}

TEST_SUITE_END();
