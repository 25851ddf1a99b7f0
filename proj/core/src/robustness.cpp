#include "toponet/robustness.hpp"

#include <cmath>

#include "toponet/errors.hpp"
#include "toponet/rng.hpp"
#include "toponet/stats.hpp"

namespace toponet {

std::vector<RobustnessPoint> robustness_curve(
    const std::vector<DagNet>& nets, const Dataset& ds,
    const std::vector<double>& fractions, int trials_per_point,
    std::uint64_t seed, bool rescale) {
  if (nets.empty()) throw DataError("robustness_curve: no models");
  if (trials_per_point < 1)
    throw DataError("robustness_curve: trials_per_point must be >= 1");
  if (ds.test_idx.empty()) throw DataError("robustness_curve: empty test split");
  for (double f : fractions)
    if (f < 0.0 || f >= 1.0)
      throw DataError("robustness_curve: fractions must lie in [0,1)");

  SplitView test = gather(ds, ds.test_idx);
  NetWorkspace ws;

  std::vector<double> baseline(nets.size());
  for (std::size_t i = 0; i < nets.size(); ++i) {
    forward(nets[i], test.x.data(), test.count, ws);
    baseline[i] =
        accuracy_from_logits(ws.logits, test.count, nets[i].n_out, test.y.data());
    if (baseline[i] <= 0.0)
      throw DataError("robustness_curve: degenerate model with zero accuracy");
  }

  std::vector<RobustnessPoint> curve;
  for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
    const double f = fractions[fi];
    std::vector<double> gains(nets.size());
    for (std::size_t i = 0; i < nets.size(); ++i) {
      if (f == 0.0) {
        gains[i] = 1.0;
        continue;
      }
      double acc_sum = 0.0;
      for (int trial = 0; trial < trials_per_point; ++trial) {
        const std::uint64_t mask_seed =
            derive_seed(seed, (i * fractions.size() + fi) * 1000003ULL + trial);
        DamageMask mask =
            make_damage_mask(nets[i], f, test.count, mask_seed, rescale);
        forward(nets[i], test.x.data(), test.count, ws, &mask);
        acc_sum += accuracy_from_logits(ws.logits, test.count, nets[i].n_out,
                                        test.y.data());
      }
      gains[i] = (acc_sum / trials_per_point) / baseline[i];
    }
    curve.push_back({f, mean_of(gains), stddev_of(gains)});
  }
  return curve;
}

}  // namespace toponet
