#include "toponet/dag.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "toponet/errors.hpp"
#include "toponet/rng.hpp"

namespace toponet {

Ordering parse_ordering(const std::string& name) {
  if (name == "random") return Ordering::random;
  if (name == "hub_desc") return Ordering::hub_desc;
  if (name == "hub_asc") return Ordering::hub_asc;
  if (name == "hub_center") return Ordering::hub_center;
  if (name == "natural") return Ordering::natural;
  throw ConfigError("unknown ordering: " + name);
}

std::string ordering_name(Ordering o) {
  switch (o) {
    case Ordering::random: return "random";
    case Ordering::hub_desc: return "hub_desc";
    case Ordering::hub_asc: return "hub_asc";
    case Ordering::hub_center: return "hub_center";
    case Ordering::natural: return "natural";
  }
  return "?";
}

std::vector<std::pair<int, int>> Dag::arcs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(base.edges.size());
  for (const auto& [u, v] : base.edges) {
    if (rank[u] < rank[v])
      out.push_back({u, v});
    else
      out.push_back({v, u});
  }
  return out;
}

void refresh_io(Dag& d) {
  const int n = d.n();
  std::vector<char> has_in(n, 0), has_out(n, 0);
  for (const auto& [u, v] : d.base.edges) {
    int lo = d.rank[u] < d.rank[v] ? u : v;
    int hi = lo == u ? v : u;
    has_out[lo] = 1;
    has_in[hi] = 1;
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return d.rank[a] < d.rank[b]; });
  d.inputs.clear();
  d.outputs.clear();
  for (int v : order) {
    if (!has_in[v]) d.inputs.push_back(v);
    if (!has_out[v]) d.outputs.push_back(v);
  }
}

namespace {

// Degree-sorted node list: decreasing degree, ties by node id.
std::vector<int> nodes_by_degree_desc(const UGraph& g) {
  auto deg = g.degrees();
  std::vector<int> nodes(g.n);
  std::iota(nodes.begin(), nodes.end(), 0);
  std::stable_sort(nodes.begin(), nodes.end(), [&](int a, int b) {
    if (deg[a] != deg[b]) return deg[a] > deg[b];
    return a < b;
  });
  return nodes;
}

std::vector<int> rank_from_order(const std::vector<int>& order) {
  std::vector<int> rank(order.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) rank[order[pos]] = pos;
  return rank;
}

}  // namespace

Dag orient(const UGraph& g, Ordering ordering, std::uint64_t seed) {
  if (!is_connected(g)) throw InfeasibleError("orient: graph not connected");
  Dag d;
  d.base = g;
  const int n = g.n;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  switch (ordering) {
    case Ordering::random: {
      Rng rng(seed);
      rng.shuffle(order);
      break;
    }
    case Ordering::natural:
      break;
    case Ordering::hub_desc:
      order = nodes_by_degree_desc(g);
      break;
    case Ordering::hub_asc: {
      order = nodes_by_degree_desc(g);
      std::reverse(order.begin(), order.end());
      break;
    }
    case Ordering::hub_center: {
      // Largest hub at the middle rank, then alternate right, left, right...
      // Once a side is exhausted the remainder spills onto the other side.
      auto sorted = nodes_by_degree_desc(g);
      std::vector<int> placed(n, -1);
      const int mid = (n - 1) / 2;
      int left = mid - 1, right = mid;
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        bool to_right = i % 2 == 0;
        if (to_right && right >= n) to_right = false;
        if (!to_right && left < 0) to_right = true;
        if (to_right)
          placed[right++] = sorted[i];
        else
          placed[left--] = sorted[i];
      }
      order = placed;
      break;
    }
  }
  d.rank = rank_from_order(order);
  refresh_io(d);
  return d;
}

namespace {

// In-place rank move within the order vector: take the node at position
// `from` and reinsert it so it lands at position `to` (positions are ranks).
void move_position(std::vector<int>& order, int from, int to) {
  int node = order[from];
  order.erase(order.begin() + from);
  order.insert(order.begin() + to, node);
}

}  // namespace

// Every move slides one node past a neighbor in the rank order, so only arcs
// inside that node's star can flip and the undirected projection is
// untouched. Demoting a source s (slide just past its lowest-rank neighbor
// u) removes source s but re-creates one at u whenever s was u's only
// lower-rank neighbor; picking such pairs blindly can two-cycle forever.
// Candidates whose move strictly changes the count are therefore preferred,
// with a seeded random neutral move to reshuffle when none exists.
Dag adjust_io(const Dag& d, int n_in, int n_out, int max_moves,
              std::uint64_t seed) {
  const int n = d.n();
  if (n_in < 1 || n_out < 1 || n_in + n_out > n)
    throw InfeasibleError("adjust_io: need 1 <= n_in, 1 <= n_out, n_in + n_out <= n");

  auto adj = d.base.adjacency();
  // order[pos] = node at rank pos
  std::vector<int> order(n);
  for (int v = 0; v < n; ++v) order[d.rank[v]] = v;
  std::vector<int> rank = d.rank;
  Rng rng(seed);

  auto recompute_rank = [&]() {
    for (int pos = 0; pos < n; ++pos) rank[order[pos]] = pos;
  };
  auto lower_neighbors = [&](int v) {
    int count = 0;
    for (int u : adj[v])
      if (rank[u] < rank[v]) ++count;
    return count;
  };
  auto higher_neighbors = [&](int v) {
    int count = 0;
    for (int u : adj[v])
      if (rank[u] > rank[v]) ++count;
    return count;
  };
  auto is_source = [&](int v) { return lower_neighbors(v) == 0; };
  auto is_sink = [&](int v) { return higher_neighbors(v) == 0; };
  auto sources = [&]() {
    std::vector<int> out;
    for (int pos = 0; pos < n; ++pos)
      if (is_source(order[pos])) out.push_back(order[pos]);
    return out;
  };
  auto sinks = [&]() {
    std::vector<int> out;
    for (int pos = 0; pos < n; ++pos)
      if (is_sink(order[pos])) out.push_back(order[pos]);
    return out;
  };
  auto lowest_rank_neighbor = [&](int v) {
    int best = -1;
    for (int u : adj[v])
      if (best == -1 || rank[u] < rank[best]) best = u;
    return best;
  };
  auto highest_rank_neighbor = [&](int v) {
    int best = -1;
    for (int u : adj[v])
      if (best == -1 || rank[u] > rank[best]) best = u;
    return best;
  };

  for (int moves = 0; moves < max_moves; ++moves) {
    auto src = sources();
    auto snk = sinks();
    const int ns = static_cast<int>(src.size());
    const int nk = static_cast<int>(snk.size());
    if (ns == n_in && nk == n_out) {
      Dag out;
      out.base = d.base;
      out.rank = rank;
      refresh_io(out);
      return out;
    }
    if (ns > n_in) {
      // Demote a source: slide it just past its lowest-rank neighbor.
      // Strict progress needs that neighbor to keep another lower-rank
      // neighbor AND the moved node to keep an out-arc (degree >= 2), else
      // the move just relabels a source as a sink and the phases ping-pong.
      // When no source qualifies (e.g. near-clique blocks, where the move
      // only swaps the two lowest members) slide a random source past a
      // random neighbor instead, so the stuck position rotates through
      // nodes that can absorb it.
      int pick = -1;
      for (auto it = src.rbegin(); it != src.rend(); ++it) {
        if (adj[*it].size() >= 2 &&
            lower_neighbors(lowest_rank_neighbor(*it)) >= 2) {
          pick = *it;
          break;
        }
      }
      int target;
      if (pick == -1) {
        pick = src[rng.uniform_index(src.size())];
        target = adj[pick][rng.uniform_index(adj[pick].size())];
      } else {
        target = lowest_rank_neighbor(pick);
      }
      move_position(order, rank[pick], rank[target]);
      recompute_rank();
    } else if (ns < n_in) {
      // Promote a non-source: slide it just before its lowest-rank neighbor,
      // making it a source. Strict progress iff that neighbor was not itself
      // a source. Candidates ordered by (fewest lower neighbors, lowest rank).
      int pick = -1, pick_count = 0;
      int fallback = -1, fallback_count = 0;
      for (int pos = 0; pos < n; ++pos) {
        const int v = order[pos];
        const int count = lower_neighbors(v);
        if (count == 0) continue;  // already a source
        if (fallback == -1 || count < fallback_count) {
          fallback = v;
          fallback_count = count;
        }
        if (!is_source(lowest_rank_neighbor(v)) &&
            (pick == -1 || count < pick_count)) {
          pick = v;
          pick_count = count;
        }
      }
      if (pick == -1) pick = fallback;
      move_position(order, rank[pick], rank[lowest_rank_neighbor(pick)]);
      recompute_rank();
    } else if (nk > n_out) {
      // Mirror of source demotion.
      int pick = -1;
      for (int t : snk) {
        if (adj[t].size() >= 2 &&
            higher_neighbors(highest_rank_neighbor(t)) >= 2) {
          pick = t;
          break;
        }
      }
      int target;
      if (pick == -1) {
        pick = snk[rng.uniform_index(snk.size())];
        target = adj[pick][rng.uniform_index(adj[pick].size())];
      } else {
        target = highest_rank_neighbor(pick);
      }
      move_position(order, rank[pick], rank[target]);
      recompute_rank();
    } else {  // nk < n_out: mirror of source promotion
      int pick = -1, pick_count = 0;
      int fallback = -1, fallback_count = 0;
      for (int pos = n - 1; pos >= 0; --pos) {
        const int v = order[pos];
        const int count = higher_neighbors(v);
        if (count == 0) continue;
        if (fallback == -1 || count < fallback_count) {
          fallback = v;
          fallback_count = count;
        }
        if (!is_sink(highest_rank_neighbor(v)) &&
            (pick == -1 || count < pick_count)) {
          pick = v;
          pick_count = count;
        }
      }
      if (pick == -1) pick = fallback;
      move_position(order, rank[pick], rank[highest_rank_neighbor(pick)]);
      recompute_rank();
    }
  }
  throw NotConvergedError("adjust_io: move budget exhausted");
}

Dag make_dag(const UGraph& g, Ordering ordering, int n_in, int n_out,
             std::uint64_t seed, int max_retries) {
  // A degree-1 node is a source or a sink under every orientation, so more
  // leaves than io slots can never be adjusted away.
  int leaves = 0;
  for (int k : g.degrees())
    if (k == 1) ++leaves;
  if (leaves > n_in + n_out)
    throw InfeasibleError("make_dag: " + std::to_string(leaves) +
                          " degree-1 nodes cannot fit " + std::to_string(n_in) +
                          "+" + std::to_string(n_out) + " io slots");
  const int max_moves = 10 * g.n;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Dag d = orient(g, ordering, derive_seed(seed, attempt));
    try {
      return adjust_io(d, n_in, n_out, max_moves, derive_seed(seed, 1000 + attempt));
    } catch (const NotConvergedError&) {
      // Non-random orderings produce the same orientation every attempt;
      // retrying cannot help.
      if (ordering != Ordering::random) throw;
    }
  }
  throw NotConvergedError("make_dag: no orientation adjusted to " +
                          std::to_string(n_in) + " sources / " +
                          std::to_string(n_out) + " sinks");
}

LevelPlan level_partition(const Dag& d) {
  const int n = d.n();
  std::vector<std::vector<int>> preds(n);
  std::vector<std::vector<int>> succs(n);
  for (const auto& [u, v] : d.arcs()) {
    preds[v].push_back(u);
    succs[u].push_back(v);
  }
  // Longest path from sources, computed in rank order (ranks are a
  // topological order by construction).
  std::vector<int> order(n);
  for (int v = 0; v < n; ++v) order[d.rank[v]] = v;
  LevelPlan plan;
  plan.level_of.assign(n, 0);
  int height = 0;
  for (int v : order) {
    int lvl = 0;
    for (int u : preds[v]) lvl = std::max(lvl, plan.level_of[u] + 1);
    plan.level_of[v] = lvl;
    height = std::max(height, lvl);
  }
  plan.levels.assign(height + 1, {});
  for (int v : order) plan.levels[plan.level_of[v]].push_back(v);
  return plan;
}

std::string to_json(const Dag& d) {
  nlohmann::json j = nlohmann::json::parse(to_json(d.base));
  j["rank"] = d.rank;
  j["inputs"] = d.inputs;
  j["outputs"] = d.outputs;
  return j.dump();
}

Dag dag_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  Dag d;
  d.base = graph_from_json(text);
  d.rank = j.at("rank").get<std::vector<int>>();
  if (static_cast<int>(d.rank.size()) != d.base.n)
    throw DataError("dag json: rank length != n");
  std::vector<char> seen(d.base.n, 0);
  for (int r : d.rank) {
    if (r < 0 || r >= d.base.n || seen[r]) throw DataError("dag json: rank not a bijection");
    seen[r] = 1;
  }
  refresh_io(d);
  // inputs/outputs are derived; stored copies are validated, not trusted.
  auto stored_in = j.at("inputs").get<std::vector<int>>();
  auto stored_out = j.at("outputs").get<std::vector<int>>();
  if (stored_in != d.inputs || stored_out != d.outputs)
    throw DataError("dag json: inputs/outputs inconsistent with ranks");
  return d;
}

void save_dag(const Dag& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << to_json(d) << "\n";
}

Dag load_dag(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return dag_from_json(text);
}

}  // namespace toponet
