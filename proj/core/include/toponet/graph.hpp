#pragma once

#include <string>
#include <utility>
#include <vector>

namespace toponet {

using Edge = std::pair<int, int>;  // canonical form: first < second

// Undirected simple graph with a family provenance tag. Invariants (enforced
// by the generators and by validate()): no self-loops, no parallel edges,
// exactly one connected component, edges stored sorted with u < v.
struct UGraph {
  int n = 0;
  std::vector<Edge> edges;
  std::string family;

  int edge_count() const { return static_cast<int>(edges.size()); }
  double mean_degree() const { return n > 0 ? 2.0 * edge_count() / n : 0.0; }

  std::vector<std::vector<int>> adjacency() const;
  std::vector<int> degrees() const;
};

// Sorts edges into canonical form (u < v, lexicographic) and drops nothing;
// throws InfeasibleError on self-loops, duplicates or out-of-range endpoints.
void canonicalize(UGraph& g);

bool is_connected(const UGraph& g);

// True iff removing `e` disconnects the graph. O(n + m) traversal.
bool is_bridge(const UGraph& g, const Edge& e);

// Indices (into g.edges) of all non-bridge edges, via Tarjan's bridge search.
std::vector<int> non_bridge_edges(const UGraph& g);

// Canonical JSON: {"edges":[[u,v],...],"family":"...","n":N}
std::string to_json(const UGraph& g);
UGraph graph_from_json(const std::string& text);

void save_graph(const UGraph& g, const std::string& path);
UGraph load_graph(const std::string& path);

}  // namespace toponet
