#include <cmath>

#include "doctest.h"
#include "toponet/attributes.hpp"
#include "toponet/graphgen.hpp"

using namespace toponet;

TEST_SUITE_BEGIN("attributes");

namespace {

UGraph path_graph(int n) {
  UGraph g;
  g.n = n;
  for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1});
  g.family = "test";
  return g;
}

UGraph k4() {
  UGraph g;
  g.n = 4;
  g.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  g.family = "test";
  return g;
}

}  // namespace

TEST_CASE("k4: density, clustering and diameter are all 1") {
  AttributeVector a = attributes(k4());
  CHECK(a.density == doctest::Approx(1.0));
  CHECK(a.avg_clustering == doctest::Approx(1.0));
  CHECK(a.diameter == doctest::Approx(1.0));
  CHECK(a.avg_path_length == doctest::Approx(1.0));
  CHECK(a.max_degree == 3.0);
  CHECK(std::isnan(a.assortativity));  // constant degrees
  CHECK(std::isnan(a.n_sources));      // undirected input
}

TEST_CASE("path of 5: diameter 4, clustering 0, known betweenness") {
  AttributeVector a = attributes(path_graph(5));
  CHECK(a.diameter == doctest::Approx(4.0));
  CHECK(a.avg_clustering == doctest::Approx(0.0));
  auto bc = betweenness_centrality(path_graph(5));
  // Middle node lies on 4 of the C(4,2)=6 source-target pairs.
  CHECK(bc[2] == doctest::Approx(4.0 / 6.0));
  CHECK(bc[1] == doctest::Approx(3.0 / 6.0));
  CHECK(bc[0] == doctest::Approx(0.0));
}

TEST_CASE("star: center carries all shortest paths") {
  UGraph g;
  g.n = 5;
  g.edges = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  g.family = "test";
  auto bc = betweenness_centrality(g);
  CHECK(bc[0] == doctest::Approx(1.0));
  for (int leaf = 1; leaf < 5; ++leaf) CHECK(bc[leaf] == doctest::Approx(0.0));
  // Star is maximally disassortative.
  CHECK(degree_assortativity(g) == doctest::Approx(-1.0));
}

TEST_CASE("paper-scale density") {
  UGraph g = gen_er(128, 732, 0);
  AttributeVector a = attributes(g);
  CHECK(a.density == doctest::Approx(1464.0 / 16256.0).epsilon(1e-12));
  CHECK(a.density == doctest::Approx(0.0901).epsilon(2e-3));
  CHECK(a.avg_degree == doctest::Approx(11.4375));
}

TEST_CASE("density invariance across families at the paper scale") {
  const double mlp_density = attributes(gen_mlp({3, 122, 3})).density;
  for (const char* name : {"er", "ba", "ws-p.5"}) {
    UGraph g = generate_family(parse_family(name), 128, 732, 3, 3, 5);
    CHECK(attributes(g).density == doctest::Approx(mlp_density).epsilon(1e-12));
  }
}

TEST_CASE("dag attributes: sources, sinks, height, level width") {
  Dag d = make_dag(gen_mlp({3, 122, 3}), Ordering::natural, 3, 3, 0);
  AttributeVector a = attributes(d);
  CHECK(a.n_sources == 3.0);
  CHECK(a.n_sinks == 3.0);
  CHECK(a.dag_height == 2.0);
  CHECK(a.mean_level_width == doctest::Approx(128.0 / 3.0));
}

TEST_CASE("powerlaw alpha: defined for hubby graphs, nan for thin tails") {
  UGraph ba = gen_ba(128, 732, 1);
  const double alpha = powerlaw_alpha_mle(ba.degrees());
  CHECK(std::isfinite(alpha));
  CHECK(alpha > 1.0);
  CHECK(std::isnan(powerlaw_alpha_mle(path_graph(10).degrees())));
}

TEST_CASE("correlate: perfect, undefined and rank-based columns") {
  std::vector<AttributeVector> rows(4);
  std::vector<double> acc{0.1, 0.2, 0.3, 0.4};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].density = acc[i];              // identical to accuracy
    rows[i].avg_degree = 5.0;              // constant -> undefined
    rows[i].max_degree = -double(i * i);   // monotone decreasing
    rows[i].degree_variance = 1.0 + i;     // defined, increasing
    rows[i].powerlaw_alpha = 1.0;
    rows[i].avg_clustering = 0.5;
    rows[i].assortativity = 0.0;
    rows[i].avg_path_length = 2.0;
    rows[i].diameter = 3.0;
    rows[i].betweenness_mean = 0.1;
    rows[i].betweenness_max = 0.2;
    rows[i].n_sources = 3;
    rows[i].n_sinks = 3;
    rows[i].dag_height = 5;
    rows[i].mean_level_width = 8;
  }
  auto cors = correlate(rows, acc);
  CHECK(cors[0].name == "density");
  CHECK(cors[0].pearson == doctest::Approx(1.0));
  CHECK(cors[0].spearman == doctest::Approx(1.0));
  CHECK(std::isnan(cors[1].pearson));  // constant avg_degree
  CHECK(cors[3].name == "max_degree");
  CHECK(cors[3].spearman == doctest::Approx(-1.0));  // perfectly anti-monotone
}

TEST_SUITE_END();
