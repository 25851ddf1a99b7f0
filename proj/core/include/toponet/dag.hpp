#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "toponet/graph.hpp"

namespace toponet {

// How node ranks are assigned before orienting edges low-rank -> high-rank.
//   random:     uniform permutation
//   hub_desc:   decreasing degree (hubs feed the inputs)
//   hub_asc:    increasing degree (hubs collect at the outputs)
//   hub_center: decreasing degree placed center-outward, alternating right
//               then left of the middle rank
//   natural:    rank = node id; the canonical layered orientation of a
//               multipartite graph
enum class Ordering { random, hub_desc, hub_asc, hub_center, natural };

Ordering parse_ordering(const std::string& name);
std::string ordering_name(Ordering o);

// Oriented acyclic view of an undirected graph. Every edge {u,v} becomes the
// arc u->v iff rank[u] < rank[v], so the undirected projection of the arcs is
// always exactly base.edges.
struct Dag {
  UGraph base;
  std::vector<int> rank;     // node -> position in 0..n-1, a bijection
  std::vector<int> inputs;   // in-degree-0 nodes, increasing rank
  std::vector<int> outputs;  // out-degree-0 nodes, increasing rank

  int n() const { return base.n; }
  // One arc per base edge, in canonical (sorted undirected) edge order.
  // Weight vectors index into this order.
  std::vector<std::pair<int, int>> arcs() const;
};

// Recomputes inputs/outputs from base + rank.
void refresh_io(Dag& d);

Dag orient(const UGraph& g, Ordering ordering, std::uint64_t seed);

// Moves nodes within the rank order (never touching edges) until the DAG has
// exactly n_in sources and n_out sinks. Throws NotConvergedError when the
// move budget runs out; callers normally go through make_dag, which retries
// with fresh orientations.
Dag adjust_io(const Dag& d, int n_in, int n_out, int max_moves,
              std::uint64_t seed);

// orient + adjust_io with up to `max_retries` re-orientations on
// non-convergence. max_moves defaults to 10*n.
Dag make_dag(const UGraph& g, Ordering ordering, int n_in, int n_out,
             std::uint64_t seed, int max_retries = 20);

struct LevelPlan {
  std::vector<std::vector<int>> levels;  // level 0 = sources
  std::vector<int> level_of;             // node -> level index
  int height() const { return static_cast<int>(levels.size()) - 1; }
};

// level(v) = longest directed path length from any source to v. Nodes within
// a level have no arcs between them and can be computed in parallel.
LevelPlan level_partition(const Dag& d);

// Graph JSON extended with "rank", "inputs", "outputs".
std::string to_json(const Dag& d);
Dag dag_from_json(const std::string& text);

void save_dag(const Dag& d, const std::string& path);
Dag load_dag(const std::string& path);

}  // namespace toponet
