#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "toponet/jobs.hpp"
#include "toponet/rng.hpp"

using namespace toponet;

TEST_SUITE_BEGIN("rng");

TEST_CASE("same seed reproduces the stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform_index stays in range and covers the range") {
  Rng rng(1);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 7000; ++i) {
    auto v = rng.uniform_index(7);
    REQUIRE(v < 7);
    ++seen[v];
  }
  for (int count : seen) CHECK(count > 800);  // ~1000 each
}

TEST_CASE("uniform lies in [0,1)") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal moments are plausible") {
  Rng rng(7);
  std::vector<double> xs(20000);
  for (auto& x : xs) x = rng.normal();
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= xs.size();
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("shuffle is a permutation and seed-stable") {
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  Rng a(9), b(9);
  a.shuffle(v);
  b.shuffle(w);
  CHECK(v == w);
  std::sort(w.begin(), w.end());
  std::vector<int> id(50);
  std::iota(id.begin(), id.end(), 0);
  CHECK(w == id);
}

TEST_CASE("derived seeds differ per stream") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("run_parallel: slot order is scheduling-independent") {
  std::vector<std::function<int()>> jobs;
  for (int i = 0; i < 64; ++i)
    jobs.push_back([i]() { return i * i; });
  auto serial = toponet::run_parallel(jobs, 1);
  auto threaded = toponet::run_parallel(jobs, 4);
  CHECK(serial == threaded);
  for (int i = 0; i < 64; ++i) CHECK(threaded[i] == i * i);
}

TEST_CASE("run_parallel: first failing job's exception propagates") {
  std::vector<std::function<int()>> jobs;
  for (int i = 0; i < 8; ++i)
    jobs.push_back([i]() -> int {
      if (i == 3) throw std::runtime_error("job three");
      if (i == 6) throw std::runtime_error("job six");
      return i;
    });
  try {
    toponet::run_parallel(jobs, 3);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "job three");
  }
}

TEST_SUITE_END();
