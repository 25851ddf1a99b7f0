#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace toponet {

enum class Manifold { swiss_roll, s_curve };

Manifold parse_manifold(const std::string& name);
std::string manifold_name(Manifold m);

// Labeled point cloud with optional train/val/test index splits. Coordinates
// are min-max normalized to [0,1] per dimension at generation/load time.
struct Dataset {
  int dim = 0;
  int n_classes = 0;
  std::vector<double> points;  // row-major [size][dim]
  std::vector<int> labels;
  std::vector<int> train_idx, val_idx, test_idx;

  // provenance
  std::string source;  // "swiss_roll" | "s_curve" | tabular path
  int n_reps = 0;
  double sigma = 0.0;
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(labels.size()); }
  const double* row(int i) const { return points.data() + static_cast<std::size_t>(i) * dim; }
};

// Noiseless 3D coordinates for curve parameter u and transverse parameter v,
// both in [0,1). Swiss roll: t = 1.5*pi*(1+2u), (t cos t, 21 v, t sin t);
// s curve: t = 3*pi*(u - 1/2), (sin t, 2 v, sign(t)(cos t - 1)).
std::array<double, 3> manifold_point(Manifold kind, double u, double v);

// The curve position t is split into n_classes*n_reps equal-count segments;
// segment i takes class i mod n_classes, so each class owns exactly n_reps
// segments. Gaussian noise (std sigma) is added after labeling, then the
// cloud is min-max normalized. With shuffle_segments, the round-robin
// segment->class map is replaced by a seeded shuffle of the same balanced
// multiset.
Dataset gen_manifold(Manifold kind, int m, int n_classes, int n_reps,
                     double sigma, std::uint64_t seed,
                     bool shuffle_segments = false);

// Uniformly random disjoint index sets of the given sizes (sum <= size).
void apply_split(Dataset& ds, int train, int val, int test, std::uint64_t seed);

// CSV with a header; all non-label columns must be numeric. Labels are
// factorized to 0..C-1 in first-appearance order.
Dataset load_tabular(const std::string& path, const std::string& label_column,
                     bool normalize);

// In-place per-column min-max. Zero-range columns map to constant 0.
void minmax_normalize(std::vector<double>& points, int rows, int dim);

// Dataset file format: columns x0..x{d-1},label,split plus a JSON sidecar
// at <path>.meta.json.
void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

// Gathers the rows of one split into contiguous buffers.
struct SplitView {
  std::vector<double> x;
  std::vector<int> y;
  int count = 0;
};
SplitView gather(const Dataset& ds, const std::vector<int>& idx);

}  // namespace toponet
