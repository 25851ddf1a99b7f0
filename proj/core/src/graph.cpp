#include "toponet/graph.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

#include "json.hpp"
#include "toponet/errors.hpp"

namespace toponet {

std::vector<std::vector<int>> UGraph::adjacency() const {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

std::vector<int> UGraph::degrees() const {
  std::vector<int> deg(n, 0);
  for (const auto& [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

void canonicalize(UGraph& g) {
  for (auto& [u, v] : g.edges) {
    if (u == v) throw InfeasibleError("self-loop on node " + std::to_string(u));
    if (u < 0 || v < 0 || u >= g.n || v >= g.n)
      throw InfeasibleError("edge endpoint out of range");
    if (u > v) std::swap(u, v);
  }
  std::sort(g.edges.begin(), g.edges.end());
  if (std::adjacent_find(g.edges.begin(), g.edges.end()) != g.edges.end())
    throw InfeasibleError("parallel edge");
}

bool is_connected(const UGraph& g) {
  if (g.n == 0) return false;
  auto adj = g.adjacency();
  std::vector<char> seen(g.n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == g.n;
}

bool is_bridge(const UGraph& g, const Edge& e) {
  // Traverse from e.first with e removed; bridge iff e.second unreachable.
  auto adj = g.adjacency();
  std::vector<char> seen(g.n, 0);
  std::vector<int> stack{e.first};
  seen[e.first] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if ((u == e.first && v == e.second) || (u == e.second && v == e.first))
        continue;
      if (!seen[v]) {
        if (v == e.second) return false;
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return true;
}

std::vector<int> non_bridge_edges(const UGraph& g) {
  // Tarjan lowlink bridge search, iterative to survive deep graphs.
  const int n = g.n;
  const int m = g.edge_count();
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge idx)
  for (int i = 0; i < m; ++i) {
    adj[g.edges[i].first].push_back({g.edges[i].second, i});
    adj[g.edges[i].second].push_back({g.edges[i].first, i});
  }
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<char> bridge(m, 0);
  int timer = 0;
  struct Frame {
    int u;
    int parent_edge;
    std::size_t next;
  };
  for (int root = 0; root < n; ++root) {
    if (disc[root] != -1) continue;
    std::vector<Frame> stack{{root, -1, 0}};
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < adj[f.u].size()) {
        auto [v, ei] = adj[f.u][f.next++];
        if (ei == f.parent_edge) continue;
        if (disc[v] == -1) {
          disc[v] = low[v] = timer++;
          stack.push_back({v, ei, 0});
        } else {
          low[f.u] = std::min(low[f.u], disc[v]);
        }
      } else {
        int u = f.u;
        int pe = f.parent_edge;
        stack.pop_back();
        if (!stack.empty()) {
          int p = stack.back().u;
          low[p] = std::min(low[p], low[u]);
          if (low[u] > disc[p]) bridge[pe] = 1;
        }
      }
    }
  }
  std::vector<int> out;
  for (int i = 0; i < m; ++i)
    if (!bridge[i]) out.push_back(i);
  return out;
}

std::string to_json(const UGraph& g) {
  nlohmann::json j;
  j["n"] = g.n;
  j["family"] = g.family;
  auto edges = nlohmann::json::array();
  for (const auto& [u, v] : g.edges) edges.push_back({u, v});
  j["edges"] = edges;
  return j.dump();
}

UGraph graph_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  UGraph g;
  g.n = j.at("n").get<int>();
  g.family = j.at("family").get<std::string>();
  for (const auto& e : j.at("edges"))
    g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  canonicalize(g);
  return g;
}

void save_graph(const UGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << to_json(g) << "\n";
}

UGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return graph_from_json(text);
}

}  // namespace toponet
