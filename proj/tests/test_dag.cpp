#include <algorithm>
#include <set>

#include "doctest.h"
#include "toponet/dag.hpp"
#include "toponet/errors.hpp"
#include "toponet/graphgen.hpp"

using namespace toponet;

TEST_SUITE_BEGIN("dag");

namespace {

UGraph path3() {
  UGraph g;
  g.n = 3;
  g.edges = {{0, 1}, {1, 2}};
  g.family = "test";
  return g;
}

UGraph star5() {
  UGraph g;
  g.n = 5;
  g.edges = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};  // hub = 0
  g.family = "test";
  return g;
}

// Kahn's algorithm as an independent acyclicity check.
bool kahn_acyclic(const Dag& d) {
  const int n = d.n();
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> succ(n);
  for (const auto& [u, v] : d.arcs()) {
    ++indeg[v];
    succ[u].push_back(v);
  }
  std::vector<int> queue;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) queue.push_back(v);
  int seen = 0;
  while (!queue.empty()) {
    int u = queue.back();
    queue.pop_back();
    ++seen;
    for (int v : succ[u])
      if (--indeg[v] == 0) queue.push_back(v);
  }
  return seen == n;
}

std::set<Edge> projected(const Dag& d) {
  std::set<Edge> out;
  for (auto [u, v] : d.arcs()) out.insert({std::min(u, v), std::max(u, v)});
  return out;
}

}  // namespace

TEST_CASE("orient: increasing ranks on a path produce the chain") {
  Dag d = orient(path3(), Ordering::natural, 0);
  CHECK(d.arcs() == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
  CHECK(d.inputs == std::vector<int>{0});
  CHECK(d.outputs == std::vector<int>{2});
}

TEST_CASE("orient: hub_desc puts the star hub at rank 0 with all out-arcs") {
  Dag d = orient(star5(), Ordering::hub_desc, 0);
  CHECK(d.rank[0] == 0);
  CHECK(d.inputs == std::vector<int>{0});
  CHECK(d.outputs.size() == 4);
  for (auto [u, v] : d.arcs()) {
    CHECK(u == 0);
    CHECK(v != 0);
  }
}

TEST_CASE("orient: hub_asc is the reverse of hub_desc") {
  Dag d = orient(star5(), Ordering::hub_asc, 0);
  CHECK(d.rank[0] == 4);  // hub last
  CHECK(d.outputs == std::vector<int>{0});
}

TEST_CASE("orient: hub_center places hubs mid-sequence") {
  // Degrees: node 0 = 4, leaves = 1. Center of 5 ranks is position 2.
  Dag d = orient(star5(), Ordering::hub_center, 0);
  CHECK(d.rank[0] == 2);
  CHECK(d.inputs.size() == 2);
  CHECK(d.outputs.size() == 2);
}

TEST_CASE("orient: projection returns the undirected edges for any ordering") {
  UGraph g = gen_ba(40, 110, 3);
  const std::set<Edge> original(g.edges.begin(), g.edges.end());
  for (auto ord : {Ordering::random, Ordering::hub_desc, Ordering::hub_asc,
                   Ordering::hub_center, Ordering::natural}) {
    Dag d = orient(g, ord, 17);
    CHECK(projected(d) == original);
    CHECK(kahn_acyclic(d));
  }
}

TEST_CASE("orient: rank is always a bijection") {
  UGraph g = gen_er(30, 60, 1);
  Dag d = orient(g, Ordering::random, 5);
  std::vector<int> sorted = d.rank;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 30; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("adjust_io: a dag already at target is returned unchanged") {
  Dag d = orient(path3(), Ordering::natural, 0);
  Dag adjusted = adjust_io(d, 1, 1, 30, 0);
  CHECK(adjusted.rank == d.rank);
  CHECK(adjusted.inputs == d.inputs);
  CHECK(adjusted.outputs == d.outputs);
}

TEST_CASE("adjust_io: star reaches 2 sources and 2 sinks with edges intact") {
  UGraph g = star5();
  const std::string canonical = to_json(g);
  Dag d = make_dag(g, Ordering::random, 2, 2, 9);
  CHECK(d.inputs.size() == 2);
  CHECK(d.outputs.size() == 2);
  CHECK(to_json(d.base) == canonical);  // byte-identical projection
  CHECK(kahn_acyclic(d));
}

TEST_CASE("adjust_io: paper-scale families settle at 3 sources and 3 sinks") {
  for (const char* name : {"er", "ba", "ws-p.5"}) {
    UGraph g = generate_family(parse_family(name), 128, 732, 3, 3, 1);
    const std::string canonical = to_json(g);
    Dag d = make_dag(g, Ordering::random, 3, 3, 2);
    CHECK(d.inputs.size() == 3);
    CHECK(d.outputs.size() == 3);
    CHECK(to_json(d.base) == canonical);
    CHECK(kahn_acyclic(d));
    // sources/sinks listed in increasing rank
    for (std::size_t i = 1; i < d.inputs.size(); ++i)
      CHECK(d.rank[d.inputs[i - 1]] < d.rank[d.inputs[i]]);
    for (std::size_t i = 1; i < d.outputs.size(); ++i)
      CHECK(d.rank[d.outputs[i - 1]] < d.rank[d.outputs[i]]);
  }
}

TEST_CASE("adjust_io: validates argument ranges") {
  Dag d = orient(path3(), Ordering::natural, 0);
  CHECK_THROWS_AS(adjust_io(d, 0, 1, 10, 0), InfeasibleError);
  CHECK_THROWS_AS(adjust_io(d, 2, 2, 10, 0), InfeasibleError);
}

TEST_CASE("level_partition: chain, diamond and multipartite") {
  Dag chain = orient(path3(), Ordering::natural, 0);
  LevelPlan lp = level_partition(chain);
  CHECK(lp.levels == std::vector<std::vector<int>>{{0}, {1}, {2}});
  CHECK(lp.height() == 2);

  UGraph diamond;
  diamond.n = 4;
  diamond.edges = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  diamond.family = "test";
  Dag dd = orient(diamond, Ordering::natural, 0);
  LevelPlan dlp = level_partition(dd);
  CHECK(dlp.levels == std::vector<std::vector<int>>{{0}, {1, 2}, {3}});

  Dag mlp = orient(gen_mlp({3, 122, 3}), Ordering::natural, 0);
  LevelPlan mlp_lp = level_partition(mlp);
  CHECK(mlp_lp.levels.size() == 3);
  CHECK(mlp_lp.height() == 2);
  CHECK(mlp_lp.levels[0].size() == 3);
  CHECK(mlp_lp.levels[1].size() == 122);
  CHECK(mlp_lp.levels[2].size() == 3);
}

TEST_CASE("level_partition: level 0 is exactly the sources, arcs go upward") {
  UGraph g = gen_ws(60, 180, 0.5, 4);
  Dag d = make_dag(g, Ordering::random, 3, 3, 8);
  LevelPlan lp = level_partition(d);
  std::set<int> level0(lp.levels[0].begin(), lp.levels[0].end());
  CHECK(level0 == std::set<int>(d.inputs.begin(), d.inputs.end()));
  for (auto [u, v] : d.arcs()) CHECK(lp.level_of[u] < lp.level_of[v]);
}

TEST_CASE("dag json: extends graph json and round-trips") {
  UGraph g = gen_er(20, 40, 2);
  Dag d = make_dag(g, Ordering::random, 3, 3, 5);
  const std::string text = to_json(d);
  Dag back = dag_from_json(text);
  CHECK(back.rank == d.rank);
  CHECK(back.inputs == d.inputs);
  CHECK(back.outputs == d.outputs);
  CHECK(back.base.edges == d.base.edges);
  CHECK(to_json(back) == text);
}

TEST_CASE("make_dag is deterministic given the seed") {
  UGraph g = gen_ba(50, 150, 6);
  Dag a = make_dag(g, Ordering::random, 3, 3, 77);
  Dag b = make_dag(g, Ordering::random, 3, 3, 77);
  CHECK(a.rank == b.rank);
}

TEST_SUITE_END();
