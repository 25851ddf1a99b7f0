#include <cmath>

#include "doctest.h"
#include "toponet/errors.hpp"
#include "toponet/graphgen.hpp"
#include "toponet/rng.hpp"
#include "toponet/robustness.hpp"
#include "toponet/train.hpp"

using namespace toponet;

TEST_SUITE_BEGIN("robustness");

namespace {

// A couple of quickly trained small multipartite models on an easy task.
struct Fixture {
  Dataset ds;
  std::vector<DagNet> nets;
};

Fixture trained_fixture() {
  Fixture fx;
  fx.ds = gen_manifold(Manifold::swiss_roll, 450, 3, 1, 0.0, 3);
  apply_split(fx.ds, 250, 100, 100, 5);
  TrainConfig cfg;
  cfg.lr = 0.01;
  cfg.batch_size = 32;
  cfg.max_epochs = 60;
  for (std::uint64_t seed = 0; seed < 2; ++seed) {
    DagNet net = init_net(orient(gen_mlp({3, 20, 3}), Ordering::natural, 0),
                          derive_seed(seed, 1));
    cfg.seed = seed;
    train(net, fx.ds, cfg);
    fx.nets.push_back(std::move(net));
  }
  return fx;
}

}  // namespace

TEST_CASE("gain at f=0 is exactly 1 with zero spread") {
  Fixture fx = trained_fixture();
  auto curve = robustness_curve(fx.nets, fx.ds, {0.0, 0.2}, 2, 9);
  CHECK(curve[0].f == 0.0);
  CHECK(curve[0].mean_gain == 1.0);
  CHECK(curve[0].std_gain == 0.0);
  CHECK(curve[1].mean_gain <= 1.0 + 1e-12);
}

TEST_CASE("near-total damage collapses to roughly chance accuracy") {
  Fixture fx = trained_fixture();
  auto curve = robustness_curve(fx.nets, fx.ds, {0.0, 0.95}, 3, 4);
  const double gain = curve[1].mean_gain;
  // acc(0.95) should land near chance (1/3) over a high baseline.
  CHECK(gain < 0.75);
  CHECK(gain > 0.05);
}

TEST_CASE("deterministic for a fixed seed") {
  Fixture fx = trained_fixture();
  auto a = robustness_curve(fx.nets, fx.ds, {0.1, 0.3}, 2, 21);
  auto b = robustness_curve(fx.nets, fx.ds, {0.1, 0.3}, 2, 21);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].mean_gain == b[i].mean_gain);
    CHECK(a[i].std_gain == b[i].std_gain);
  }
}

TEST_CASE("degenerate model is rejected") {
  // Zero net predicts class 0 everywhere; a test split with no zero labels
  // yields zero accuracy.
  UGraph g = gen_mlp({2, 3, 2});
  DagNet net = make_net(orient(g, Ordering::natural, 0));
  Dataset ds;
  ds.dim = 2;
  ds.n_classes = 2;
  ds.points = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  ds.labels = {1, 1, 1};
  ds.test_idx = {0, 1, 2};
  CHECK_THROWS_AS(robustness_curve({net}, ds, {0.0}, 1, 0), DataError);
}

TEST_CASE("input validation") {
  Fixture fx = trained_fixture();
  CHECK_THROWS_AS(robustness_curve({}, fx.ds, {0.0}, 1, 0), DataError);
  CHECK_THROWS_AS(robustness_curve(fx.nets, fx.ds, {1.0}, 1, 0), DataError);
  CHECK_THROWS_AS(robustness_curve(fx.nets, fx.ds, {0.0}, 0, 0), DataError);
}

TEST_SUITE_END();
