#pragma once

#include <cstdint>
#include <vector>

#include "toponet/data.hpp"
#include "toponet/net.hpp"

namespace toponet {

struct RobustnessPoint {
  double f = 0.0;
  double mean_gain = 0.0;
  double std_gain = 0.0;
};

// Accuracy gain A(f) = acc(f)/acc(0) on the test split, with per-sample
// Bernoulli(f) removal of hidden nodes. Each (net, f) cell averages
// `trials_per_point` independent masks; the returned mean/std are over nets.
// f = 0 is evaluated unmasked, so A(0) = 1 identically. Throws DataError on
// a degenerate model (zero baseline accuracy).
std::vector<RobustnessPoint> robustness_curve(
    const std::vector<DagNet>& nets, const Dataset& ds,
    const std::vector<double>& fractions, int trials_per_point,
    std::uint64_t seed, bool rescale = false);

}  // namespace toponet
