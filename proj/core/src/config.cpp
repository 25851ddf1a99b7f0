#include "toponet/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "toponet/errors.hpp"

namespace toponet {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens_of(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double to_double(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("bad number '" + s + "' for key " + key);
  }
}

long long to_int(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError("bad integer '" + s + "' for key " + key);
  }
}

bool to_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("bad boolean '" + s + "' for key " + key);
}

// Seed lists accept explicit values ("0 1 2") and ranges ("0:5" = 0..4).
std::vector<std::uint64_t> to_seed_list(const std::string& value,
                                        const std::string& key) {
  std::vector<std::uint64_t> out;
  for (const auto& tok : tokens_of(value)) {
    auto colon = tok.find(':');
    if (colon == std::string::npos) {
      out.push_back(static_cast<std::uint64_t>(to_int(tok, key)));
    } else {
      const long long lo = to_int(tok.substr(0, colon), key);
      const long long hi = to_int(tok.substr(colon + 1), key);
      if (hi < lo) throw ConfigError("empty range '" + tok + "' for key " + key);
      for (long long s = lo; s < hi; ++s)
        out.push_back(static_cast<std::uint64_t>(s));
    }
  }
  if (out.empty()) throw ConfigError("empty list for key " + key);
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    if (kv.count(key))
      throw ConfigError("duplicate key: " + key);
    kv[key] = value;
  }

  auto take = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::string();
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  if (auto v = take("schema_version"); !v.empty()) {
    cfg.schema_version = static_cast<int>(to_int(v, "schema_version"));
    if (cfg.schema_version != 1)
      throw ConfigError("unsupported schema_version " + v);
  }

  if (auto v = take("dataset.kind"); !v.empty()) {
    if (v != "swiss_roll" && v != "s_curve" && v != "tabular")
      throw ConfigError("dataset.kind must be swiss_roll, s_curve or tabular");
    cfg.dataset.kind = v;
  }
  if (auto v = take("dataset.m"); !v.empty())
    cfg.dataset.m = static_cast<int>(to_int(v, "dataset.m"));
  if (auto v = take("dataset.n_classes"); !v.empty())
    cfg.dataset.n_classes = static_cast<int>(to_int(v, "dataset.n_classes"));
  if (auto v = take("dataset.n_reps"); !v.empty())
    cfg.dataset.n_reps = static_cast<int>(to_int(v, "dataset.n_reps"));
  if (auto v = take("dataset.sigma"); !v.empty())
    cfg.dataset.sigma = to_double(v, "dataset.sigma");
  if (auto v = take("dataset.seed"); !v.empty())
    cfg.dataset.seed = static_cast<std::uint64_t>(to_int(v, "dataset.seed"));
  if (auto v = take("dataset.split"); !v.empty()) {
    auto toks = tokens_of(v);
    if (toks.size() != 3)
      throw ConfigError("dataset.split needs exactly 3 sizes");
    cfg.dataset.train = static_cast<int>(to_int(toks[0], "dataset.split"));
    cfg.dataset.val = static_cast<int>(to_int(toks[1], "dataset.split"));
    cfg.dataset.test = static_cast<int>(to_int(toks[2], "dataset.split"));
  }
  if (auto v = take("dataset.split_seed"); !v.empty())
    cfg.dataset.split_seed =
        static_cast<std::uint64_t>(to_int(v, "dataset.split_seed"));
  if (auto v = take("dataset.segment_shuffle"); !v.empty())
    cfg.dataset.segment_shuffle = to_bool(v, "dataset.segment_shuffle");
  if (auto v = take("dataset.path"); !v.empty()) cfg.dataset.path = v;
  if (auto v = take("dataset.label_column"); !v.empty())
    cfg.dataset.label_column = v;
  if (auto v = take("dataset.normalize"); !v.empty())
    cfg.dataset.normalize = to_bool(v, "dataset.normalize");

  if (auto v = take("n"); !v.empty()) cfg.n = static_cast<int>(to_int(v, "n"));
  if (auto v = take("l"); !v.empty()) cfg.l = static_cast<int>(to_int(v, "l"));
  if (auto v = take("ordering"); !v.empty()) cfg.ordering = parse_ordering(v);
  if (auto v = take("families"); !v.empty()) {
    cfg.families = tokens_of(v);
    for (const auto& f : cfg.families) parse_family(f);  // validate now
  }
  if (auto v = take("lr_grid"); !v.empty()) {
    cfg.lr_grid.clear();
    for (const auto& t : tokens_of(v)) cfg.lr_grid.push_back(to_double(t, "lr_grid"));
  }
  if (auto v = take("bs_grid"); !v.empty()) {
    cfg.bs_grid.clear();
    for (const auto& t : tokens_of(v))
      cfg.bs_grid.push_back(static_cast<int>(to_int(t, "bs_grid")));
  }
  if (auto v = take("hpo_seeds"); !v.empty()) cfg.hpo_seeds = to_seed_list(v, "hpo_seeds");
  if (auto v = take("eval_seeds"); !v.empty())
    cfg.eval_seeds = to_seed_list(v, "eval_seeds");
  if (auto v = take("max_epochs"); !v.empty())
    cfg.max_epochs = static_cast<int>(to_int(v, "max_epochs"));
  if (auto v = take("improvement_eps"); !v.empty())
    cfg.improvement_eps = to_double(v, "improvement_eps");
  if (auto v = take("holm"); !v.empty()) cfg.holm = to_bool(v, "holm");

  if (auto v = take("sweep.sizes"); !v.empty()) {
    cfg.sweep_sizes.clear();
    for (const auto& t : tokens_of(v))
      cfg.sweep_sizes.push_back(static_cast<int>(to_int(t, "sweep.sizes")));
  }
  if (auto v = take("sweep.densities"); !v.empty()) {
    cfg.sweep_densities.clear();
    for (const auto& t : tokens_of(v))
      cfg.sweep_densities.push_back(to_double(t, "sweep.densities"));
  }
  if (auto v = take("sweep.lr"); !v.empty()) cfg.sweep_lr = to_double(v, "sweep.lr");
  if (auto v = take("sweep.bs"); !v.empty())
    cfg.sweep_bs = static_cast<int>(to_int(v, "sweep.bs"));
  if (auto v = take("sweep.runs"); !v.empty())
    cfg.sweep_runs = static_cast<int>(to_int(v, "sweep.runs"));

  if (auto v = take("robustness.fractions"); !v.empty()) {
    cfg.robustness_fractions.clear();
    for (const auto& t : tokens_of(v))
      cfg.robustness_fractions.push_back(to_double(t, "robustness.fractions"));
  }
  if (auto v = take("robustness.trials"); !v.empty())
    cfg.robustness_trials = static_cast<int>(to_int(v, "robustness.trials"));

  if (auto v = take("out_dir"); !v.empty()) cfg.out_dir = v;

  if (!kv.empty()) throw ConfigError("unknown config key: " + kv.begin()->first);

  if (cfg.dataset.kind == "tabular" && cfg.dataset.path.empty())
    throw ConfigError("dataset.kind = tabular requires dataset.path");
  if (cfg.dataset.kind == "tabular" && cfg.dataset.label_column.empty())
    throw ConfigError("dataset.kind = tabular requires dataset.label_column");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::string canonical_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "schema_version=" << cfg.schema_version << "\n";
  out << "dataset.kind=" << cfg.dataset.kind << "\n";
  out << "dataset.m=" << cfg.dataset.m << "\n";
  out << "dataset.n_classes=" << cfg.dataset.n_classes << "\n";
  out << "dataset.n_reps=" << cfg.dataset.n_reps << "\n";
  out << "dataset.sigma=" << fmt(cfg.dataset.sigma) << "\n";
  out << "dataset.seed=" << cfg.dataset.seed << "\n";
  out << "dataset.split=" << cfg.dataset.train << " " << cfg.dataset.val << " "
      << cfg.dataset.test << "\n";
  out << "dataset.split_seed=" << cfg.dataset.split_seed << "\n";
  out << "dataset.segment_shuffle=" << cfg.dataset.segment_shuffle << "\n";
  if (!cfg.dataset.path.empty()) out << "dataset.path=" << cfg.dataset.path << "\n";
  if (!cfg.dataset.label_column.empty())
    out << "dataset.label_column=" << cfg.dataset.label_column << "\n";
  out << "dataset.normalize=" << cfg.dataset.normalize << "\n";
  out << "n=" << cfg.n << "\n";
  out << "l=" << cfg.l << "\n";
  out << "ordering=" << ordering_name(cfg.ordering) << "\n";
  out << "families=";
  for (const auto& f : cfg.families) out << f << " ";
  out << "\n";
  out << "lr_grid=";
  for (double lr : cfg.lr_grid) out << fmt(lr) << " ";
  out << "\n";
  out << "bs_grid=";
  for (int bs : cfg.bs_grid) out << bs << " ";
  out << "\n";
  out << "hpo_seeds=";
  for (auto s : cfg.hpo_seeds) out << s << " ";
  out << "\n";
  out << "eval_seeds=";
  for (auto s : cfg.eval_seeds) out << s << " ";
  out << "\n";
  out << "max_epochs=" << cfg.max_epochs << "\n";
  out << "improvement_eps=" << fmt(cfg.improvement_eps) << "\n";
  out << "holm=" << cfg.holm << "\n";
  out << "sweep.sizes=";
  for (int n : cfg.sweep_sizes) out << n << " ";
  out << "\n";
  out << "sweep.densities=";
  for (double d : cfg.sweep_densities) out << fmt(d) << " ";
  out << "\n";
  out << "sweep.lr=" << fmt(cfg.sweep_lr) << "\n";
  out << "sweep.bs=" << cfg.sweep_bs << "\n";
  out << "sweep.runs=" << cfg.sweep_runs << "\n";
  out << "robustness.fractions=";
  for (double f : cfg.robustness_fractions) out << fmt(f) << " ";
  out << "\n";
  out << "robustness.trials=" << cfg.robustness_trials << "\n";
  return out.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = canonical_config(cfg);
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Dataset build_dataset(const ExperimentConfig& cfg) {
  Dataset ds;
  if (cfg.dataset.kind == "tabular") {
    ds = load_tabular(cfg.dataset.path, cfg.dataset.label_column,
                      cfg.dataset.normalize);
  } else {
    ds = gen_manifold(parse_manifold(cfg.dataset.kind), cfg.dataset.m,
                      cfg.dataset.n_classes, cfg.dataset.n_reps,
                      cfg.dataset.sigma, cfg.dataset.seed,
                      cfg.dataset.segment_shuffle);
  }
  apply_split(ds, cfg.dataset.train, cfg.dataset.val, cfg.dataset.test,
              cfg.dataset.split_seed);
  return ds;
}

ModelSpec model_spec_for(const ExperimentConfig& cfg,
                         const std::string& family_name, const Dataset& ds) {
  ModelSpec spec;
  spec.family = parse_family(family_name);
  spec.n = cfg.n;
  spec.l = cfg.l;
  spec.ordering = cfg.ordering;
  spec.n_in = ds.dim;
  spec.n_out = ds.n_classes;
  return spec;
}

TrainConfig base_train_config(const ExperimentConfig& cfg) {
  TrainConfig tc;
  tc.max_epochs = cfg.max_epochs;
  tc.improvement_eps = cfg.improvement_eps;
  return tc;
}

}  // namespace toponet
