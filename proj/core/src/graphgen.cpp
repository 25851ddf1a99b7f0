#include "toponet/graphgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "toponet/errors.hpp"
#include "toponet/rng.hpp"

namespace toponet {

namespace {

long long pair_count(int n) { return static_cast<long long>(n) * (n - 1) / 2; }

void require_connectivity_feasible(int n, int l) {
  if (n < 2) throw InfeasibleError("need at least 2 nodes");
  if (l < n - 1)
    throw InfeasibleError("l=" + std::to_string(l) + " below spanning-tree minimum " +
                          std::to_string(n - 1));
  if (l > pair_count(n))
    throw InfeasibleError("l=" + std::to_string(l) + " exceeds max " +
                          std::to_string(pair_count(n)) + " for n=" + std::to_string(n));
}

// Removes `surplus` edges chosen uniformly among the current non-bridge
// edges, one at a time, so connectivity is preserved at every step.
// Returns false when stuck (every remaining surplus edge is a bridge).
bool trim_to(UGraph& g, int l, Rng& rng) {
  while (g.edge_count() > l) {
    auto candidates = non_bridge_edges(g);
    if (candidates.empty()) return false;
    int pick = candidates[rng.uniform_index(candidates.size())];
    g.edges.erase(g.edges.begin() + pick);
  }
  return true;
}

void finalize(UGraph& g) { canonicalize(g); }

}  // namespace

UGraph gen_er(int n, int l, std::uint64_t seed) {
  require_connectivity_feasible(n, l);
  const long long total = pair_count(n);
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    UGraph g;
    g.n = n;
    g.family = "er";
    if (total <= (1 << 20)) {
      // Materialize all pairs and take a uniform l-subset by partial shuffle.
      std::vector<Edge> pairs;
      pairs.reserve(total);
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.push_back({u, v});
      for (int i = 0; i < l; ++i) {
        std::size_t j = i + rng.uniform_index(pairs.size() - i);
        std::swap(pairs[i], pairs[j]);
      }
      g.edges.assign(pairs.begin(), pairs.begin() + l);
    } else {
      std::set<Edge> picked;
      while (static_cast<int>(picked.size()) < l) {
        int u = static_cast<int>(rng.uniform_index(n));
        int v = static_cast<int>(rng.uniform_index(n));
        if (u == v) continue;
        picked.insert({std::min(u, v), std::max(u, v)});
      }
      g.edges.assign(picked.begin(), picked.end());
    }
    finalize(g);
    if (is_connected(g)) return g;
  }
  throw RetriesExhaustedError("er: no connected sample in " +
                              std::to_string(kMaxResamples) + " attempts");
}

int ws_ring_degree(int n, int l) {
  for (int k = 2; k < n; k += 2) {
    if (static_cast<long long>(n) * k / 2 >= l) return k;
  }
  throw InfeasibleError("ws: no even ring degree reaches l=" + std::to_string(l));
}

UGraph ring_lattice(int n, int k) {
  if (k % 2 != 0 || k < 2 || k >= n)
    throw InfeasibleError("ring lattice needs even k in [2, n)");
  UGraph g;
  g.n = n;
  g.family = "ws";
  for (int u = 0; u < n; ++u) {
    for (int j = 1; j <= k / 2; ++j) {
      int v = (u + j) % n;
      g.edges.push_back({std::min(u, v), std::max(u, v)});
    }
  }
  finalize(g);
  return g;
}

UGraph gen_ws(int n, int l, double p, std::uint64_t seed) {
  require_connectivity_feasible(n, l);
  if (p < 0.0 || p > 1.0) throw InfeasibleError("ws: p outside [0,1]");
  const int k = ws_ring_degree(n, l);
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    UGraph g = ring_lattice(n, k);
    // Rewire the far endpoint of each lattice edge with probability p,
    // avoiding self-loops and already-present edges.
    std::set<Edge> present(g.edges.begin(), g.edges.end());
    std::vector<Edge> order(g.edges.begin(), g.edges.end());
    for (const Edge& e : order) {
      if (!rng.bernoulli(p)) continue;
      const int u = e.first;
      // Saturated neighborhoods keep the original edge.
      for (int tries = 0; tries < 8 * n; ++tries) {
        int cand = static_cast<int>(rng.uniform_index(n));
        if (cand == u) continue;
        Edge ne{std::min(u, cand), std::max(u, cand)};
        if (present.count(ne)) continue;
        present.erase(e);
        present.insert(ne);
        break;
      }
    }
    g.edges.assign(present.begin(), present.end());
    finalize(g);
    if (!is_connected(g)) continue;
    if (trim_to(g, l, rng)) {
      finalize(g);
      return g;
    }
  }
  throw RetriesExhaustedError("ws: no connected sample in " +
                              std::to_string(kMaxResamples) + " attempts");
}

int ba_stub_count(int n, int l) {
  for (int m = 1; m < n; ++m) {
    long long built = m + static_cast<long long>(n - m - 1) * m;
    if (built >= l) return m;
    if (m > n - m - 1) break;  // m(n-m) is past its maximum and shrinking
  }
  throw InfeasibleError("ba: no stub count reaches l=" + std::to_string(l));
}

UGraph gen_ba(int n, int l, std::uint64_t seed) {
  require_connectivity_feasible(n, l);
  const int m = ba_stub_count(n, l);
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    UGraph g;
    g.n = n;
    g.family = "ba";
    // Initial star of m+1 nodes centered on node 0.
    std::vector<int> endpoints;  // one entry per edge endpoint: degree urn
    for (int v = 1; v <= m; ++v) {
      g.edges.push_back({0, v});
      endpoints.push_back(0);
      endpoints.push_back(v);
    }
    for (int v = m + 1; v < n; ++v) {
      std::set<int> targets;
      while (static_cast<int>(targets.size()) < m) {
        int t = endpoints[rng.uniform_index(endpoints.size())];
        if (t != v) targets.insert(t);
      }
      for (int t : targets) {
        g.edges.push_back({std::min(v, t), std::max(v, t)});
        endpoints.push_back(v);
        endpoints.push_back(t);
      }
    }
    finalize(g);
    // Growth from a star is connected by construction; trimming may still fail.
    if (trim_to(g, l, rng)) {
      finalize(g);
      return g;
    }
  }
  throw RetriesExhaustedError("ba: trimming failed in " +
                              std::to_string(kMaxResamples) + " attempts");
}

long long sbm_intra_pairs(int n, int communities) {
  const int block = n / communities;
  return static_cast<long long>(communities) * block * (block - 1) / 2;
}

long long sbm_inter_pairs(int n, int communities) {
  return pair_count(n) - sbm_intra_pairs(n, communities);
}

bool sbm_feasible(int n, int l, int communities, double p_intra,
                  double q_inter) {
  if (communities < 1 || n % communities != 0) return false;
  if (p_intra < 0 || p_intra > 1 || q_inter < 0 || q_inter > 1) return false;
  const double expected = p_intra * sbm_intra_pairs(n, communities) +
                          q_inter * sbm_inter_pairs(n, communities);
  return expected >= l;
}

UGraph gen_sbm(int n, int l, int communities, double p_intra, double q_inter,
               std::uint64_t seed) {
  require_connectivity_feasible(n, l);
  if (communities < 1 || n % communities != 0)
    throw InfeasibleError("sbm: communities must divide n");
  if (!sbm_feasible(n, l, communities, p_intra, q_inter))
    throw InfeasibleError("sbm: expected edge count below l");
  const int block = n / communities;
  Rng rng(seed);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    UGraph g;
    g.n = n;
    g.family = "sbm";
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        const bool intra = (u / block) == (v / block);
        if (rng.bernoulli(intra ? p_intra : q_inter)) g.edges.push_back({u, v});
      }
    }
    if (g.edge_count() < l) continue;
    finalize(g);
    if (!is_connected(g)) continue;
    if (trim_to(g, l, rng)) {
      finalize(g);
      return g;
    }
  }
  throw RetriesExhaustedError("sbm: no connected sample with >= l edges in " +
                              std::to_string(kMaxResamples) + " attempts");
}

UGraph gen_mlp(const std::vector<int>& layer_sizes) {
  if (layer_sizes.size() < 2)
    throw InfeasibleError("mlp: need at least 2 layers");
  for (int s : layer_sizes)
    if (s < 1) throw InfeasibleError("mlp: layer sizes must be positive");
  UGraph g;
  g.n = std::accumulate(layer_sizes.begin(), layer_sizes.end(), 0);
  g.family = "mlp";
  int offset = 0;
  for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i) {
    const int a = layer_sizes[i];
    const int b = layer_sizes[i + 1];
    for (int u = 0; u < a; ++u)
      for (int v = 0; v < b; ++v)
        g.edges.push_back({offset + u, offset + a + v});
    offset += a;
  }
  finalize(g);
  return g;
}

int mlp_hidden_size(int n, int n_in, int n_out) {
  if (n <= n_in + n_out)
    throw InfeasibleError("mlp: no room for hidden nodes (n <= n_in + n_out)");
  return n - n_in - n_out;
}

FamilySpec parse_family(const std::string& name) {
  FamilySpec spec;
  spec.name = name;
  auto starts_with = [&](const std::string& prefix) {
    return name.rfind(prefix, 0) == 0;
  };
  auto parse_double = [&](const std::string& s) {
    if (s.empty()) throw ConfigError("bad number in family name: " + name);
    // Accept leading-dot fractions like ".5".
    const std::string padded = s[0] == '.' ? "0" + s : s;
    try {
      std::size_t used = 0;
      double v = std::stod(padded, &used);
      if (used != padded.size())
        throw ConfigError("bad number in family name: " + name);
      return v;
    } catch (const std::logic_error&) {
      throw ConfigError("bad number in family name: " + name);
    }
  };
  if (name == "er") {
    spec.kind = Family::er;
  } else if (name == "ba") {
    spec.kind = Family::ba;
  } else if (starts_with("ws-p")) {
    spec.kind = Family::ws;
    spec.ws_p = parse_double(name.substr(4));
    if (spec.ws_p < 0 || spec.ws_p > 1)
      throw ConfigError("ws rewiring probability outside [0,1]: " + name);
  } else if (starts_with("mlp-h")) {
    spec.kind = Family::mlp;
    if (name != "mlp-h1")
      throw ConfigError("only the one-hidden-layer multipartite family "
                        "(mlp-h1) is supported: " + name);
    spec.mlp_hidden_layers = 1;
  } else if (starts_with("sbm")) {
    spec.kind = Family::sbm;
    std::size_t dash = name.find('-');
    if (dash == std::string::npos) throw ConfigError("bad sbm family: " + name);
    try {
      spec.sbm_communities = std::stoi(name.substr(3, dash - 3));
    } catch (const std::logic_error&) {
      throw ConfigError("bad sbm community count: " + name);
    }
    const std::string rest = name.substr(dash + 1);
    if (rest == "assort") {
      spec.sbm_mode = FamilySpec::SbmMode::assortative;
    } else if (rest == "disassort") {
      spec.sbm_mode = FamilySpec::SbmMode::disassortative;
    } else if (rest.rfind("p", 0) == 0) {
      std::size_t qpos = rest.find("-q");
      if (qpos == std::string::npos) throw ConfigError("bad sbm family: " + name);
      spec.sbm_mode = FamilySpec::SbmMode::explicit_pq;
      spec.sbm_p = parse_double(rest.substr(1, qpos - 1));
      spec.sbm_q = parse_double(rest.substr(qpos + 2));
    } else {
      throw ConfigError("bad sbm family: " + name);
    }
  } else {
    throw ConfigError("unknown family: " + name);
  }
  return spec;
}

std::pair<double, double> sbm_preset_probabilities(const FamilySpec& spec,
                                                   int n, int l) {
  const int c = spec.sbm_communities;
  if (c < 1 || n % c != 0)
    throw InfeasibleError("sbm: communities must divide n");
  const double e_in = static_cast<double>(sbm_intra_pairs(n, c));
  const double e_out = static_cast<double>(sbm_inter_pairs(n, c));
  const double target = 1.05 * l;
  switch (spec.sbm_mode) {
    case FamilySpec::SbmMode::assortative: {
      const double q = 0.004;
      const double p = (target - q * e_out) / e_in;
      if (p <= 0 || p > 1)
        throw InfeasibleError("sbm preset: solved p outside (0,1]");
      return {p, q};
    }
    case FamilySpec::SbmMode::disassortative: {
      const double q = target / e_out;
      if (q <= 0 || q > 1)
        throw InfeasibleError("sbm preset: solved q outside (0,1]");
      return {0.0, q};
    }
    case FamilySpec::SbmMode::explicit_pq:
      return {spec.sbm_p, spec.sbm_q};
  }
  throw InfeasibleError("sbm: unknown mode");
}

static UGraph generate_family_impl(const FamilySpec& spec, int n, int l,
                                   int n_in, int n_out, std::uint64_t seed);

// Failures are reported under the family label so callers can name the
// offending config entry.
UGraph generate_family(const FamilySpec& spec, int n, int l, int n_in,
                       int n_out, std::uint64_t seed) {
  try {
    return generate_family_impl(spec, n, l, n_in, n_out, seed);
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(spec.name + ": " + e.what());
  } catch (const RetriesExhaustedError& e) {
    throw RetriesExhaustedError(spec.name + ": " + e.what());
  }
}

static UGraph generate_family_impl(const FamilySpec& spec, int n, int l,
                                   int n_in, int n_out, std::uint64_t seed) {
  UGraph g;
  switch (spec.kind) {
    case Family::er:
      g = gen_er(n, l, seed);
      break;
    case Family::ws:
      g = gen_ws(n, l, spec.ws_p, seed);
      break;
    case Family::ba:
      g = gen_ba(n, l, seed);
      break;
    case Family::sbm: {
      auto [p, q] = sbm_preset_probabilities(spec, n, l);
      g = gen_sbm(n, l, spec.sbm_communities, p, q, seed);
      break;
    }
    case Family::mlp: {
      const int hidden = mlp_hidden_size(n, n_in, n_out);
      UGraph mlp = gen_mlp({n_in, hidden, n_out});
      if (mlp.edge_count() != l)
        throw InfeasibleError(
            "mlp: biclique edge count " + std::to_string(mlp.edge_count()) +
            " does not match requested l=" + std::to_string(l));
      g = mlp;
      break;
    }
  }
  g.family = spec.name;
  return g;
}

}  // namespace toponet
