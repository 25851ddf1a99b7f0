#pragma once

#include <string>
#include <vector>

#include "toponet/dag.hpp"
#include "toponet/graph.hpp"

namespace toponet {

// Topological profile of one graph. Path/clustering metrics come from the
// undirected projection; the last four fields need an orientation and stay
// NaN when computed from a bare UGraph. powerlaw_alpha and assortativity are
// NaN when undefined (thin degree tail, constant degrees).
struct AttributeVector {
  double density = 0.0;
  double avg_degree = 0.0;
  double degree_variance = 0.0;
  double max_degree = 0.0;
  double powerlaw_alpha = 0.0;
  double avg_clustering = 0.0;
  double assortativity = 0.0;
  double avg_path_length = 0.0;
  double diameter = 0.0;
  double betweenness_mean = 0.0;
  double betweenness_max = 0.0;
  double n_sources = 0.0;
  double n_sinks = 0.0;
  double dag_height = 0.0;
  double mean_level_width = 0.0;

  static const std::vector<std::string>& names();
  std::vector<double> values() const;
};

AttributeVector attributes(const UGraph& g);
AttributeVector attributes(const Dag& d);

double average_clustering(const UGraph& g);

// Normalized (by (n-1)(n-2)/2) shortest-path betweenness, Brandes' algorithm.
std::vector<double> betweenness_centrality(const UGraph& g);

// Degree-degree Pearson correlation over edges (Newman's r).
double degree_assortativity(const UGraph& g);

// Continuous MLE of the degree-distribution tail exponent over degrees
// >= k_min; NaN when fewer than 3 nodes qualify. Diagnostic only.
double powerlaw_alpha_mle(const std::vector<int>& degrees, int k_min = 6);

// (average shortest path length, diameter) over all connected pairs.
std::pair<double, double> path_metrics(const UGraph& g);

struct AttributeCorrelation {
  std::string name;
  double pearson;
  double spearman;
};

// Per-attribute correlation against an aligned accuracy vector; NaN marks
// undefined (zero-variance) entries.
std::vector<AttributeCorrelation> correlate(
    const std::vector<AttributeVector>& rows,
    const std::vector<double>& accuracy);

}  // namespace toponet
