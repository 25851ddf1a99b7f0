#include "toponet/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "toponet/errors.hpp"
#include "toponet/rng.hpp"

namespace toponet {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Manifold parse_manifold(const std::string& name) {
  if (name == "swiss_roll") return Manifold::swiss_roll;
  if (name == "s_curve") return Manifold::s_curve;
  throw ConfigError("unknown manifold: " + name);
}

std::string manifold_name(Manifold m) {
  return m == Manifold::swiss_roll ? "swiss_roll" : "s_curve";
}

std::array<double, 3> manifold_point(Manifold kind, double u, double v) {
  if (kind == Manifold::swiss_roll) {
    const double t = 1.5 * kPi * (1.0 + 2.0 * u);
    return {t * std::cos(t), 21.0 * v, t * std::sin(t)};
  }
  const double t = 3.0 * kPi * (u - 0.5);
  const double sign = t < 0 ? -1.0 : 1.0;
  return {std::sin(t), 2.0 * v, sign * (std::cos(t) - 1.0)};
}

void minmax_normalize(std::vector<double>& points, int rows, int dim) {
  for (int d = 0; d < dim; ++d) {
    double lo = points[d], hi = points[d];
    for (int i = 1; i < rows; ++i) {
      const double x = points[static_cast<std::size_t>(i) * dim + d];
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    const double range = hi - lo;
    for (int i = 0; i < rows; ++i) {
      double& x = points[static_cast<std::size_t>(i) * dim + d];
      x = range > 0 ? (x - lo) / range : 0.0;
    }
  }
}

Dataset gen_manifold(Manifold kind, int m, int n_classes, int n_reps,
                     double sigma, std::uint64_t seed, bool shuffle_segments) {
  if (m < 1 || n_classes < 1 || n_reps < 1)
    throw DataError("gen_manifold: counts must be positive");
  if (sigma < 0) throw DataError("gen_manifold: sigma must be >= 0");
  const int segments = n_classes * n_reps;
  if (m < segments)
    throw DataError("gen_manifold: fewer samples than segments");

  Dataset ds;
  ds.dim = 3;
  ds.n_classes = n_classes;
  ds.source = manifold_name(kind);
  ds.n_reps = n_reps;
  ds.sigma = sigma;
  ds.seed = seed;
  ds.points.resize(static_cast<std::size_t>(m) * 3);
  ds.labels.resize(m);

  Rng rng(derive_seed(seed, 0));
  std::vector<double> t(m);
  for (int i = 0; i < m; ++i) {
    const double u = rng.uniform();
    const double v = rng.uniform();
    auto p = manifold_point(kind, u, v);
    ds.points[static_cast<std::size_t>(i) * 3 + 0] = p[0];
    ds.points[static_cast<std::size_t>(i) * 3 + 1] = p[1];
    ds.points[static_cast<std::size_t>(i) * 3 + 2] = p[2];
    t[i] = kind == Manifold::swiss_roll ? 1.5 * kPi * (1.0 + 2.0 * u)
                                        : 3.0 * kPi * (u - 0.5);
  }

  // Equal-count segmentation along t: sort positions, cut into `segments`
  // blocks (earlier blocks absorb the remainder), label block i with class
  // i mod n_classes. Labels depend only on the noiseless positions.
  std::vector<int> by_t(m);
  std::iota(by_t.begin(), by_t.end(), 0);
  std::sort(by_t.begin(), by_t.end(),
            [&](int a, int b) { return t[a] < t[b]; });

  std::vector<int> segment_class(segments);
  for (int s = 0; s < segments; ++s) segment_class[s] = s % n_classes;
  if (shuffle_segments) {
    Rng class_rng(derive_seed(seed, 1));
    class_rng.shuffle(segment_class);
  }

  const int base = m / segments;
  const int extra = m % segments;
  int pos = 0;
  for (int s = 0; s < segments; ++s) {
    const int len = base + (s < extra ? 1 : 0);
    for (int jj = 0; jj < len; ++jj) ds.labels[by_t[pos++]] = segment_class[s];
  }

  if (sigma > 0) {
    Rng noise(derive_seed(seed, 2));
    for (auto& x : ds.points) x += noise.normal(0.0, sigma);
  }

  minmax_normalize(ds.points, m, 3);
  return ds;
}

void apply_split(Dataset& ds, int train, int val, int test,
                 std::uint64_t seed) {
  if (train < 0 || val < 0 || test < 0 || train + val + test > ds.size())
    throw DataError("split sizes exceed dataset size");
  std::vector<int> perm(ds.size());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);
  ds.train_idx.assign(perm.begin(), perm.begin() + train);
  ds.val_idx.assign(perm.begin() + train, perm.begin() + train + val);
  ds.test_idx.assign(perm.begin() + train + val,
                     perm.begin() + train + val + test);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Dataset load_tabular(const std::string& path, const std::string& label_column,
                     bool normalize) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  auto header = split_csv_line(line);
  for (auto& h : header) h = trim(h);
  int label_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == label_column) label_col = static_cast<int>(i);
  if (label_col < 0)
    throw DataError(path + ": missing label column '" + label_column + "'");

  Dataset ds;
  ds.dim = static_cast<int>(header.size()) - 1;
  if (ds.dim < 1) throw DataError(path + ": no attribute columns");
  ds.source = path;

  std::vector<std::string> class_names;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw DataError(path + ":" + std::to_string(lineno) + ": column count mismatch");
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string cell = trim(cells[c]);
      if (static_cast<int>(c) == label_col) {
        auto it = std::find(class_names.begin(), class_names.end(), cell);
        if (it == class_names.end()) {
          class_names.push_back(cell);
          ds.labels.push_back(static_cast<int>(class_names.size()) - 1);
        } else {
          ds.labels.push_back(static_cast<int>(it - class_names.begin()));
        }
      } else {
        try {
          std::size_t used = 0;
          ds.points.push_back(std::stod(cell, &used));
          if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::logic_error&) {
          throw DataError(path + ":" + std::to_string(lineno) +
                          ": non-numeric attribute '" + cell + "'");
        }
      }
    }
  }
  if (ds.labels.empty()) throw DataError(path + ": no data rows");
  ds.n_classes = static_cast<int>(class_names.size());
  if (normalize) minmax_normalize(ds.points, ds.size(), ds.dim);
  return ds;
}

void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  std::vector<std::string> split_of(ds.size(), "none");
  for (int i : ds.train_idx) split_of[i] = "train";
  for (int i : ds.val_idx) split_of[i] = "val";
  for (int i : ds.test_idx) split_of[i] = "test";
  for (int d = 0; d < ds.dim; ++d) out << "x" << d << ",";
  out << "label,split\n";
  char buf[40];
  for (int i = 0; i < ds.size(); ++i) {
    for (int d = 0; d < ds.dim; ++d) {
      std::snprintf(buf, sizeof buf, "%.17g", ds.row(i)[d]);
      out << buf << ",";
    }
    out << ds.labels[i] << "," << split_of[i] << "\n";
  }
  nlohmann::json meta;
  meta["source"] = ds.source;
  meta["n_classes"] = ds.n_classes;
  meta["n_reps"] = ds.n_reps;
  meta["sigma"] = ds.sigma;
  meta["seed"] = ds.seed;
  meta["dim"] = ds.dim;
  std::ofstream mout(path + ".meta.json");
  if (!mout) throw DataError("cannot open " + path + ".meta.json for writing");
  mout << meta.dump() << "\n";
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  auto header = split_csv_line(line);
  const int dim = static_cast<int>(header.size()) - 2;
  if (dim < 1 || header[dim] != "label" || header[dim + 1] != "split")
    throw DataError(path + ": not a dataset file");
  Dataset ds;
  ds.dim = dim;
  int row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != dim + 2)
      throw DataError(path + ": column count mismatch");
    for (int d = 0; d < dim; ++d) ds.points.push_back(std::stod(cells[d]));
    ds.labels.push_back(std::stoi(cells[dim]));
    const std::string split = trim(cells[dim + 1]);
    if (split == "train")
      ds.train_idx.push_back(row);
    else if (split == "val")
      ds.val_idx.push_back(row);
    else if (split == "test")
      ds.test_idx.push_back(row);
    else if (split != "none")
      throw DataError(path + ": bad split tag '" + split + "'");
    ++row;
  }
  ds.n_classes = ds.labels.empty()
                     ? 0
                     : *std::max_element(ds.labels.begin(), ds.labels.end()) + 1;
  std::ifstream min(path + ".meta.json");
  if (min) {
    nlohmann::json meta = nlohmann::json::parse(min);
    ds.source = meta.value("source", "");
    ds.n_reps = meta.value("n_reps", 0);
    ds.sigma = meta.value("sigma", 0.0);
    ds.seed = meta.value("seed", std::uint64_t{0});
    ds.n_classes = meta.value("n_classes", ds.n_classes);
  }
  return ds;
}

SplitView gather(const Dataset& ds, const std::vector<int>& idx) {
  SplitView view;
  view.count = static_cast<int>(idx.size());
  view.x.resize(idx.size() * ds.dim);
  view.y.resize(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const double* src = ds.row(idx[i]);
    std::copy(src, src + ds.dim, view.x.begin() + i * ds.dim);
    view.y[i] = ds.labels[idx[i]];
  }
  return view;
}

}  // namespace toponet
