#include <benchmark/benchmark.h>

#include "toponet/dag.hpp"
#include "toponet/graphgen.hpp"

using namespace toponet;

namespace {

void BM_Generate(benchmark::State& state, const std::string& family) {
  auto spec = parse_family(family);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    UGraph g = generate_family(spec, 128, 732, 3, 3, seed++);
    benchmark::DoNotOptimize(g.edges.data());
  }
}

void BM_MakeDag(benchmark::State& state) {
  UGraph g = gen_ba(128, 732, 0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Dag d = make_dag(g, Ordering::random, 3, 3, seed++);
    benchmark::DoNotOptimize(d.rank.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Generate, er, std::string("er"));
BENCHMARK_CAPTURE(BM_Generate, ws_p5, std::string("ws-p.5"));
BENCHMARK_CAPTURE(BM_Generate, ba, std::string("ba"));
BENCHMARK_CAPTURE(BM_Generate, sbm4_assort, std::string("sbm4-assort"));
BENCHMARK(BM_MakeDag);
