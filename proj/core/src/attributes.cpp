#include "toponet/attributes.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "toponet/errors.hpp"
#include "toponet/stats.hpp"

namespace toponet {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

const std::vector<std::string>& AttributeVector::names() {
  static const std::vector<std::string> kNames = {
      "density",         "avg_degree",      "degree_variance",
      "max_degree",      "powerlaw_alpha",  "avg_clustering",
      "assortativity",   "avg_path_length", "diameter",
      "betweenness_mean", "betweenness_max", "n_sources",
      "n_sinks",         "dag_height",      "mean_level_width"};
  return kNames;
}

std::vector<double> AttributeVector::values() const {
  return {density,        avg_degree,      degree_variance, max_degree,
          powerlaw_alpha, avg_clustering,  assortativity,   avg_path_length,
          diameter,       betweenness_mean, betweenness_max, n_sources,
          n_sinks,        dag_height,      mean_level_width};
}

double average_clustering(const UGraph& g) {
  auto adj = g.adjacency();
  std::vector<std::vector<char>> is_adj(g.n, std::vector<char>(g.n, 0));
  for (const auto& [u, v] : g.edges) {
    is_adj[u][v] = 1;
    is_adj[v][u] = 1;
  }
  double total = 0.0;
  for (int v = 0; v < g.n; ++v) {
    const int k = static_cast<int>(adj[v].size());
    if (k < 2) continue;
    int links = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (is_adj[adj[v][i]][adj[v][j]]) ++links;
    total += 2.0 * links / (static_cast<double>(k) * (k - 1));
  }
  return total / g.n;
}

std::pair<double, double> path_metrics(const UGraph& g) {
  auto adj = g.adjacency();
  long long dist_sum = 0;
  long long pairs = 0;
  int diameter = 0;
  std::vector<int> dist(g.n);
  for (int s = 0; s < g.n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (int v = s + 1; v < g.n; ++v) {
      if (dist[v] > 0) {
        dist_sum += dist[v];
        ++pairs;
        diameter = std::max(diameter, dist[v]);
      }
    }
  }
  if (pairs == 0) return {kNan, kNan};
  return {static_cast<double>(dist_sum) / pairs, static_cast<double>(diameter)};
}

std::vector<double> betweenness_centrality(const UGraph& g) {
  const int n = g.n;
  auto adj = g.adjacency();
  std::vector<double> centrality(n, 0.0);
  std::vector<int> dist(n), sigma(n);
  std::vector<double> delta(n);
  std::vector<std::vector<int>> preds(n);
  std::vector<int> order;
  order.reserve(n);

  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : preds) p.clear();
    order.clear();

    dist[s] = 0;
    sigma[s] = 1;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      order.push_back(u);
      for (int v : adj[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
        if (dist[v] == dist[u] + 1) {
          sigma[v] += sigma[u];
          preds[v].push_back(u);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int w = *it;
      for (int u : preds[w])
        delta[u] += (static_cast<double>(sigma[u]) / sigma[w]) * (1.0 + delta[w]);
      if (w != s) centrality[w] += delta[w];
    }
  }
  // Each unordered pair was counted from both endpoints; normalize to [0,1].
  const double scale =
      n > 2 ? 1.0 / ((n - 1.0) * (n - 2.0)) : kNan;
  for (auto& c : centrality) c *= scale;
  return centrality;
}

double degree_assortativity(const UGraph& g) {
  auto deg = g.degrees();
  std::vector<double> x, y;
  x.reserve(2 * g.edges.size());
  y.reserve(2 * g.edges.size());
  // Each edge contributes both orientations so the correlation is symmetric.
  for (const auto& [u, v] : g.edges) {
    x.push_back(deg[u]);
    y.push_back(deg[v]);
    x.push_back(deg[v]);
    y.push_back(deg[u]);
  }
  if (x.size() < 2) return kNan;
  return pearson(x, y);
}

double powerlaw_alpha_mle(const std::vector<int>& degrees, int k_min) {
  double log_sum = 0.0;
  int count = 0;
  for (int k : degrees) {
    if (k >= k_min) {
      log_sum += std::log(static_cast<double>(k) / (k_min - 0.5));
      ++count;
    }
  }
  if (count < 3 || log_sum <= 0.0) return kNan;
  return 1.0 + count / log_sum;
}

namespace {

AttributeVector undirected_attributes(const UGraph& g) {
  if (!is_connected(g))
    throw InfeasibleError("attributes: graph must be connected");
  AttributeVector a;
  const double n = g.n;
  const double l = g.edge_count();
  a.density = 2.0 * l / (n * (n - 1.0));
  a.avg_degree = 2.0 * l / n;
  auto deg = g.degrees();
  double dm = 0.0;
  for (int k : deg) dm += k;
  dm /= n;
  double dv = 0.0;
  for (int k : deg) dv += (k - dm) * (k - dm);
  a.degree_variance = dv / n;
  a.max_degree = *std::max_element(deg.begin(), deg.end());
  a.powerlaw_alpha = powerlaw_alpha_mle(deg);
  a.avg_clustering = average_clustering(g);
  a.assortativity = degree_assortativity(g);
  auto [apl, diam] = path_metrics(g);
  a.avg_path_length = apl;
  a.diameter = diam;
  auto bc = betweenness_centrality(g);
  a.betweenness_mean = mean_of(bc);
  a.betweenness_max = bc.empty() ? kNan : *std::max_element(bc.begin(), bc.end());
  a.n_sources = kNan;
  a.n_sinks = kNan;
  a.dag_height = kNan;
  a.mean_level_width = kNan;
  return a;
}

}  // namespace

AttributeVector attributes(const UGraph& g) { return undirected_attributes(g); }

AttributeVector attributes(const Dag& d) {
  AttributeVector a = undirected_attributes(d.base);
  a.n_sources = static_cast<double>(d.inputs.size());
  a.n_sinks = static_cast<double>(d.outputs.size());
  const LevelPlan plan = level_partition(d);
  a.dag_height = plan.height();
  a.mean_level_width = static_cast<double>(d.n()) / plan.levels.size();
  return a;
}

std::vector<AttributeCorrelation> correlate(
    const std::vector<AttributeVector>& rows,
    const std::vector<double>& accuracy) {
  if (rows.size() != accuracy.size())
    throw InfeasibleError("correlate: row count mismatch");
  if (rows.size() < 2)
    throw InfeasibleError("correlate: need at least 2 rows");
  std::vector<AttributeCorrelation> out;
  const auto& names = AttributeVector::names();
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::vector<double> column;
    column.reserve(rows.size());
    bool defined = true;
    for (const auto& row : rows) {
      const double v = row.values()[k];
      if (std::isnan(v)) defined = false;
      column.push_back(v);
    }
    AttributeCorrelation c{names[k], kNan, kNan};
    if (defined) {
      c.pearson = pearson(column, accuracy);
      c.spearman = spearman(column, accuracy);
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace toponet
