#include <benchmark/benchmark.h>

#include "toponet/graphgen.hpp"
#include "toponet/net.hpp"
#include "toponet/rng.hpp"

using namespace toponet;

namespace {

DagNet make_family_net(const std::string& family) {
  auto spec = parse_family(family);
  UGraph g = generate_family(spec, 128, 732, 3, 3, 0);
  const Ordering ord =
      spec.kind == Family::mlp ? Ordering::natural : Ordering::random;
  return init_net(make_dag(g, ord, 3, 3, 0), 1);
}

std::vector<double> random_batch(int batch) {
  Rng rng(7);
  std::vector<double> x(static_cast<std::size_t>(batch) * 3);
  for (auto& v : x) v = rng.uniform();
  return x;
}

// The multipartite net runs in two dense levels; complex families pay for
// their DAG height. This pair quantifies that gap.
void BM_ForwardFamily(benchmark::State& state, const std::string& family) {
  DagNet net = make_family_net(family);
  const int batch = static_cast<int>(state.range(0));
  auto x = random_batch(batch);
  NetWorkspace ws;
  for (auto _ : state) {
    forward(net, x.data(), batch, ws);
    benchmark::DoNotOptimize(ws.logits.data());
  }
  state.SetItemsProcessed(state.iterations() * batch);
  state.counters["height"] = net.plan.height();
}

void BM_TrainStep(benchmark::State& state) {
  DagNet net = make_family_net("ba");
  const int batch = 64;
  auto x = random_batch(batch);
  std::vector<int> y(batch);
  Rng rng(3);
  for (auto& label : y) label = static_cast<int>(rng.uniform_index(3));
  NetWorkspace ws;
  Gradients grads;
  for (auto _ : state) {
    forward(net, x.data(), batch, ws);
    benchmark::DoNotOptimize(backward_ce(net, ws, y.data(), grads));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}

}  // namespace

BENCHMARK_CAPTURE(BM_ForwardFamily, mlp_h1, std::string("mlp-h1"))
    ->Arg(64)
    ->Arg(675);
BENCHMARK_CAPTURE(BM_ForwardFamily, ba, std::string("ba"))->Arg(64)->Arg(675);
BENCHMARK_CAPTURE(BM_ForwardFamily, er, std::string("er"))->Arg(64)->Arg(675);
BENCHMARK_CAPTURE(BM_ForwardFamily, ws_p5, std::string("ws-p.5"))
    ->Arg(64)
    ->Arg(675);
BENCHMARK(BM_TrainStep);
