#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toponet/graph.hpp"

namespace toponet {

// Generators produce simple connected graphs with exactly `l` edges.
// Families whose native output is denser first overshoot, then trim surplus
// edges uniformly at random among non-bridges so the component stays whole.
// Disconnected samples are redrawn up to kMaxResamples times.
inline constexpr int kMaxResamples = 100;

UGraph gen_er(int n, int l, std::uint64_t seed);
UGraph gen_ws(int n, int l, double p, std::uint64_t seed);
UGraph gen_ba(int n, int l, std::uint64_t seed);
UGraph gen_sbm(int n, int l, int communities, double p_intra, double q_inter,
               std::uint64_t seed);
UGraph gen_mlp(const std::vector<int>& layer_sizes);

// Hidden-layer width of the one-hidden-layer multipartite reference at a
// given total size: n - n_in - n_out.
int mlp_hidden_size(int n, int n_in, int n_out);

// Parameter solving: smallest setting that meets or exceeds the target
// density (surplus is trimmed afterwards).
int ws_ring_degree(int n, int l);  // smallest even k with n*k/2 >= l
int ba_stub_count(int n, int l);   // smallest m with m + (n-m-1)*m >= l

long long sbm_intra_pairs(int n, int communities);
long long sbm_inter_pairs(int n, int communities);
// Expected edge count p*E_in + q*E_out must reach l for a config to be usable.
bool sbm_feasible(int n, int l, int communities, double p_intra,
                  double q_inter);

// Ring lattice used as the WS substrate: node i adjacent to its k/2 nearest
// neighbors on each side. Exposed for direct inspection in tests.
UGraph ring_lattice(int n, int k);

// Family specification as it appears in configs and output labels, e.g.
// "er", "ba", "ws-p.5", "mlp-h1", "sbm4-assort", "sbm8-p.77-q.004".
enum class Family { er, ws, ba, sbm, mlp };

struct FamilySpec {
  std::string name;
  Family kind = Family::er;
  double ws_p = 0.0;
  int sbm_communities = 0;
  // Preset modes solve p/q from (n, l) at generation time; explicit mode
  // takes them verbatim from the name.
  enum class SbmMode { explicit_pq, assortative, disassortative };
  SbmMode sbm_mode = SbmMode::explicit_pq;
  double sbm_p = 0.0;
  double sbm_q = 0.0;
  int mlp_hidden_layers = 1;
};

FamilySpec parse_family(const std::string& name);  // throws ConfigError

// Solved SBM probabilities for a preset at a concrete (n, l): expected edge
// count lands at ~1.05*l so trimming is small. Assortative presets pin
// q = 0.004 and solve p; disassortative presets pin p = 0 and solve q.
std::pair<double, double> sbm_preset_probabilities(const FamilySpec& spec,
                                                   int n, int l);

// Dispatch on the family. n_in/n_out are needed only by the multipartite
// family (layer sizes {n_in, H, n_out}); other families ignore them.
UGraph generate_family(const FamilySpec& spec, int n, int l, int n_in,
                       int n_out, std::uint64_t seed);

}  // namespace toponet
