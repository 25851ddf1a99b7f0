#include "toponet/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "toponet/attributes.hpp"
#include "toponet/errors.hpp"
#include "toponet/jobs.hpp"
#include "toponet/robustness.hpp"
#include "toponet/rng.hpp"
#include "toponet/stats.hpp"

namespace fs = std::filesystem;

namespace toponet {

namespace {

constexpr const char* kResultsHeader =
    "config_hash,phase,family,gen_seed,init_seed,lr,batch_size,best_val_loss,"
    "best_epoch,epochs_run,test_accuracy,wall_time_s";
constexpr const char* kStatsHeader = "config_hash,test,groups,statistic,p,p_adj";
constexpr const char* kSweepHeader =
    "config_hash,family,n,rho,l,runs,mean_accuracy,std_accuracy,status";
constexpr const char* kRobustnessHeader =
    "config_hash,family,f,mean_gain,std_gain,trials,rescale";

std::string fmtg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string out_root(const ExperimentConfig& cfg, const RunOptions& opts) {
  return opts.out_dir.empty() ? cfg.out_dir : opts.out_dir;
}

void ensure_dir(const std::string& path) { fs::create_directories(path); }

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::string run_key(const std::string& phase, const std::string& family,
                    std::uint64_t gen_seed, double lr, int bs) {
  return phase + "|" + family + "|" + std::to_string(gen_seed) + "|" +
         fmtg(lr) + "|" + std::to_string(bs);
}

std::string result_line(const ResultRow& r) {
  std::ostringstream out;
  out << r.config_hash << "," << r.phase << "," << r.family << ","
      << r.gen_seed << "," << r.init_seed << "," << fmtg(r.lr) << ","
      << r.batch_size << "," << fmtg(r.best_val_loss) << "," << r.best_epoch
      << "," << r.epochs_run << "," << fmtg(r.test_accuracy) << ","
      << fmtg(r.wall_time_s);
  return out.str();
}

ResultRow row_of(const RunRecord& rec, const std::string& hash,
                 const std::string& phase) {
  ResultRow r;
  r.config_hash = hash;
  r.phase = phase;
  r.family = rec.family;
  r.gen_seed = rec.gen_seed;
  r.init_seed = rec.init_seed;
  r.lr = rec.lr;
  r.batch_size = rec.batch_size;
  r.best_val_loss = rec.best_val_loss;
  r.best_epoch = rec.best_epoch;
  r.epochs_run = rec.epochs_run;
  r.test_accuracy = rec.test_accuracy;
  r.wall_time_s = rec.wall_time_s;
  return r;
}

// Appends rows to a CSV, creating it with the header first. Refuses to touch
// a file whose header differs.
void append_csv(const std::string& path, const std::string& header,
                const std::vector<std::string>& rows) {
  const bool exists = fs::exists(path);
  if (exists) {
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    if (first != header)
      throw DataError(path + ": header does not match the expected schema");
  }
  std::ofstream out(path, std::ios::app);
  if (!out) throw DataError("cannot open " + path + " for writing");
  if (!exists) out << header << "\n";
  for (const auto& r : rows) out << r << "\n";
}

// Loads a keyed CSV, enforcing single-config files.
void check_hash_column(const std::string& path,
                       const std::vector<std::vector<std::string>>& rows,
                       const std::string& hash) {
  for (const auto& cells : rows) {
    if (!cells.empty() && cells[0] != hash)
      throw ConfigError(path + ": contains rows from a different config (" +
                        cells[0] + " != " + hash + "); refusing to mix");
  }
}

std::vector<std::vector<std::string>> read_csv_body(const std::string& path,
                                                    const std::string& header) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) return rows;
  if (line != header)
    throw DataError(path + ": header does not match the expected schema");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(split_line(line));
  }
  return rows;
}

Dag build_dag_of(const ModelSpec& spec, std::uint64_t gen_seed) {
  UGraph g = generate_family(spec.family, spec.n, spec.l, spec.n_in,
                             spec.n_out, gen_seed);
  const Ordering ord =
      spec.family.kind == Family::mlp ? Ordering::natural : spec.ordering;
  return make_dag(g, ord, spec.n_in, spec.n_out, derive_seed(gen_seed, 0xDA6));
}

struct StatsRowInput {
  std::string family;
  std::vector<double> accuracies;
};

std::vector<std::string> stats_rows(const std::vector<StatsRowInput>& samples,
                                    bool holm, const std::string& hash) {
  std::vector<std::string> lines;
  if (samples.size() < 2) return lines;
  std::vector<std::vector<double>> groups;
  std::string all_names;
  for (const auto& s : samples) {
    groups.push_back(s.accuracies);
    all_names += (all_names.empty() ? "" : "|") + s.family;
  }
  const KruskalResult kw = kruskal_wallis(groups);
  {
    std::ostringstream out;
    out << hash << ",kruskal_wallis," << all_names << "," << fmtg(kw.h) << ","
        << fmtg(kw.p) << "," << fmtg(kw.p);
    lines.push_back(out.str());
  }
  std::vector<double> pvals;
  std::vector<std::pair<std::string, double>> pairs;  // (group label, U)
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      const MannWhitneyResult mw =
          mann_whitney(samples[i].accuracies, samples[j].accuracies);
      pairs.push_back({samples[i].family + "|" + samples[j].family, mw.u});
      pvals.push_back(mw.p);
    }
  }
  const std::vector<double> adjusted = holm ? holm_adjust(pvals) : pvals;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    std::ostringstream out;
    out << hash << ",mann_whitney," << pairs[k].first << ","
        << fmtg(pairs[k].second) << "," << fmtg(pvals[k]) << ","
        << fmtg(adjusted[k]);
    lines.push_back(out.str());
  }
  return lines;
}

}  // namespace

std::vector<ResultRow> load_results_csv(const std::string& path) {
  std::vector<ResultRow> rows;
  for (const auto& cells : read_csv_body(path, kResultsHeader)) {
    if (cells.size() != 12) throw DataError(path + ": malformed results row");
    ResultRow r;
    r.config_hash = cells[0];
    r.phase = cells[1];
    r.family = cells[2];
    r.gen_seed = std::stoull(cells[3]);
    r.init_seed = std::stoull(cells[4]);
    r.lr = std::stod(cells[5]);
    r.batch_size = std::stoi(cells[6]);
    r.best_val_loss = std::stod(cells[7]);
    r.best_epoch = std::stoi(cells[8]);
    r.epochs_run = std::stoi(cells[9]);
    r.test_accuracy = std::stod(cells[10]);
    r.wall_time_s = std::stod(cells[11]);
    rows.push_back(r);
  }
  return rows;
}

CommandSummary cmd_generate(const ExperimentConfig& cfg,
                            const RunOptions& opts) {
  CommandSummary summary;
  const std::string root = out_root(cfg, opts);
  ensure_dir(root + "/graphs");
  ensure_dir(root + "/dags");
  Dataset ds = build_dataset(cfg);

  struct Item {
    std::string graph_path, dag_path;
  };
  std::vector<std::function<Item()>> jobs;
  for (const auto& family : cfg.families) {
    const ModelSpec spec = model_spec_for(cfg, family, ds);
    for (std::uint64_t seed : cfg.eval_seeds) {
      jobs.push_back([spec, seed, root, family]() {
        UGraph g = generate_family(spec.family, spec.n, spec.l, spec.n_in,
                                   spec.n_out, seed);
        Dag d = build_dag_of(spec, seed);
        Item item;
        item.graph_path =
            root + "/graphs/" + family + "_s" + std::to_string(seed) + ".graph.json";
        item.dag_path =
            root + "/dags/" + family + "_s" + std::to_string(seed) + ".dag.json";
        save_graph(g, item.graph_path);
        save_dag(d, item.dag_path);
        return item;
      });
    }
  }
  auto items = run_parallel(jobs, opts.workers);
  for (const auto& item : items) {
    summary.outputs.push_back(item.graph_path);
    summary.outputs.push_back(item.dag_path);
  }
  return summary;
}

CommandSummary cmd_experiment(const ExperimentConfig& cfg,
                              const RunOptions& opts) {
  CommandSummary summary;
  const std::string root = out_root(cfg, opts);
  ensure_dir(root);
  ensure_dir(root + "/models");
  const std::string hash = config_hash(cfg);
  const std::string results_path = root + "/results.csv";

  Dataset ds = build_dataset(cfg);
  save_dataset(ds, root + "/dataset.csv");
  summary.outputs.push_back(root + "/dataset.csv");

  std::map<std::string, ResultRow> existing;
  if (fs::exists(results_path)) {
    if (!opts.resume)
      throw ConfigError(results_path +
                        " already exists; pass --resume or use a fresh --out");
    for (const auto& row : load_results_csv(results_path)) {
      if (row.config_hash != hash)
        throw ConfigError(results_path + ": contains rows from a different "
                          "config; refusing to mix");
      existing[run_key(row.phase, row.family, row.gen_seed, row.lr,
                       row.batch_size)] = row;
    }
  }

  std::vector<ResultRow> new_rows;

  // ---- hyperparameter grid: all missing (family, lr, bs, seed) runs ----
  struct HpoJob {
    ModelSpec spec;
    double lr;
    int bs;
    std::uint64_t seed;
    std::uint64_t cell;
  };
  std::vector<HpoJob> plan;
  std::vector<ModelSpec> specs;
  for (const auto& family : cfg.families)
    specs.push_back(model_spec_for(cfg, family, ds));
  {
    std::uint64_t cell = 0;
    for (const auto& spec : specs)
      for (double lr : cfg.lr_grid)
        for (int bs : cfg.bs_grid) {
          for (std::uint64_t seed : cfg.hpo_seeds)
            plan.push_back({spec, lr, bs, seed, cell});
          ++cell;
        }
  }
  const TrainConfig base = base_train_config(cfg);
  std::vector<std::function<ResultRow()>> jobs;
  std::vector<const HpoJob*> pending;
  for (const auto& job : plan) {
    const std::string key =
        run_key("hpo", job.spec.family.name, job.seed, job.lr, job.bs);
    if (existing.count(key)) {
      ++summary.skipped;
      continue;
    }
    pending.push_back(&job);
    jobs.push_back([&ds, &base, &hash, job]() {
      DagNet net = build_model(job.spec, job.seed, job.seed);
      TrainConfig tc = base;
      tc.lr = job.lr;
      tc.batch_size = job.bs;
      tc.seed = derive_seed(job.seed, 0xC311u + job.cell);
      RunRecord rec = train(net, ds, tc);
      rec.family = job.spec.family.name;
      rec.gen_seed = job.seed;
      rec.init_seed = job.seed;
      return row_of(rec, hash, "hpo");
    });
  }
  auto hpo_rows = run_parallel(jobs, opts.workers);
  summary.trained += static_cast<int>(hpo_rows.size());
  for (std::size_t i = 0; i < hpo_rows.size(); ++i) {
    const auto& job = *pending[i];
    existing[run_key("hpo", job.spec.family.name, job.seed, job.lr, job.bs)] =
        hpo_rows[i];
    new_rows.push_back(hpo_rows[i]);
  }

  // ---- per-family cell medians and best hyperparameters ----
  std::vector<std::string> grid_lines;
  std::map<std::string, std::pair<double, int>> best_hp;
  for (const auto& spec : specs) {
    std::vector<GridCell> cells;
    for (double lr : cfg.lr_grid) {
      for (int bs : cfg.bs_grid) {
        std::vector<double> losses;
        for (std::uint64_t seed : cfg.hpo_seeds) {
          const auto it =
              existing.find(run_key("hpo", spec.family.name, seed, lr, bs));
          if (it == existing.end())
            throw TrainError("internal: missing hpo run for " +
                             spec.family.name);
          losses.push_back(it->second.best_val_loss);
        }
        cells.push_back({lr, bs, median_of(losses)});
      }
    }
    const int best = select_best_cell(cells);
    best_hp[spec.family.name] = {cells[best].lr, cells[best].batch_size};
    for (const auto& c : cells) {
      std::ostringstream out;
      out << hash << "," << spec.family.name << "," << fmtg(c.lr) << ","
          << c.batch_size << "," << fmtg(c.median_val_loss);
      grid_lines.push_back(out.str());
    }
  }
  {
    const std::string grid_path = root + "/grid.csv";
    std::ofstream out(grid_path);
    if (!out) throw DataError("cannot open " + grid_path + " for writing");
    out << "config_hash,family,lr,batch_size,median_val_loss\n";
    for (const auto& l : grid_lines) out << l << "\n";
    summary.outputs.push_back(grid_path);
  }

  // ---- topology evaluation at the tuned hyperparameters ----
  struct EvalJob {
    ModelSpec spec;
    double lr;
    int bs;
    std::uint64_t seed;
    std::string model_path;
  };
  std::vector<EvalJob> eval_plan;
  for (const auto& spec : specs) {
    const auto [lr, bs] = best_hp.at(spec.family.name);
    for (std::uint64_t seed : cfg.eval_seeds) {
      EvalJob job{spec, lr, bs, seed,
                  root + "/models/" + spec.family.name + "_s" +
                      std::to_string(seed) + ".net.json"};
      eval_plan.push_back(job);
    }
  }
  std::vector<std::function<ResultRow()>> eval_jobs;
  std::vector<const EvalJob*> eval_pending;
  for (const auto& job : eval_plan) {
    const std::string key =
        run_key("eval", job.spec.family.name, job.seed, job.lr, job.bs);
    if (existing.count(key) && fs::exists(job.model_path)) {
      ++summary.skipped;
      continue;
    }
    eval_pending.push_back(&job);
    eval_jobs.push_back([&ds, &base, &hash, job]() {
      DagNet net = build_model(job.spec, job.seed, job.seed);
      TrainConfig tc = base;
      tc.lr = job.lr;
      tc.batch_size = job.bs;
      tc.seed = derive_seed(job.seed, 0xE7A1u);
      RunRecord rec = train(net, ds, tc);
      rec.family = job.spec.family.name;
      rec.gen_seed = job.seed;
      rec.init_seed = job.seed;
      save_net(net, job.model_path);
      return row_of(rec, hash, "eval");
    });
  }
  auto eval_rows = run_parallel(eval_jobs, opts.workers);
  summary.trained += static_cast<int>(eval_rows.size());
  for (std::size_t i = 0; i < eval_rows.size(); ++i) {
    const auto& job = *eval_pending[i];
    existing[run_key("eval", job.spec.family.name, job.seed, job.lr, job.bs)] =
        eval_rows[i];
    new_rows.push_back(eval_rows[i]);
  }

  // ---- nonparametric comparison across families ----
  std::vector<StatsRowInput> samples;
  for (const auto& spec : specs) {
    const auto [lr, bs] = best_hp.at(spec.family.name);
    StatsRowInput s;
    s.family = spec.family.name;
    for (std::uint64_t seed : cfg.eval_seeds)
      s.accuracies.push_back(
          existing.at(run_key("eval", spec.family.name, seed, lr, bs))
              .test_accuracy);
    samples.push_back(std::move(s));
  }
  {
    const std::string stats_path = root + "/stats.csv";
    std::ofstream out(stats_path);
    if (!out) throw DataError("cannot open " + stats_path + " for writing");
    out << kStatsHeader << "\n";
    for (const auto& l : stats_rows(samples, cfg.holm, hash)) out << l << "\n";
    summary.outputs.push_back(stats_path);
  }

  std::vector<std::string> lines;
  for (const auto& r : new_rows) lines.push_back(result_line(r));
  append_csv(results_path, kResultsHeader, lines);
  summary.outputs.push_back(results_path);
  return summary;
}

CommandSummary cmd_sweep(const ExperimentConfig& cfg, const RunOptions& opts) {
  CommandSummary summary;
  const std::string root = out_root(cfg, opts);
  ensure_dir(root);
  const std::string hash = config_hash(cfg);
  const std::string sweep_path = root + "/sweep.csv";

  Dataset ds = build_dataset(cfg);
  const TrainConfig base = base_train_config(cfg);

  std::map<std::string, bool> done;
  if (fs::exists(sweep_path)) {
    if (!opts.resume)
      throw ConfigError(sweep_path +
                        " already exists; pass --resume or use a fresh --out");
    auto body = read_csv_body(sweep_path, kSweepHeader);
    check_hash_column(sweep_path, body, hash);
    for (const auto& cells : body)
      if (cells.size() >= 4) done[cells[1] + "|" + cells[2] + "|" + cells[3]] = true;
  }

  struct Cell {
    std::string family;
    int n;
    double rho;
    long long l;
  };
  std::vector<Cell> cells;
  for (const auto& family : cfg.families)
    for (int n : cfg.sweep_sizes)
      for (double rho : cfg.sweep_densities) {
        const long long l =
            std::llround(rho * static_cast<double>(n) * (n - 1) / 2.0);
        cells.push_back({family, n, rho, l});
      }

  std::vector<std::function<std::string()>> jobs;
  for (const auto& cell : cells) {
    if (done.count(cell.family + "|" + std::to_string(cell.n) + "|" +
                   fmtg(cell.rho))) {
      ++summary.skipped;
      continue;
    }
    jobs.push_back([&cfg, &ds, &base, &hash, cell]() {
      ModelSpec spec = model_spec_for(cfg, cell.family, ds);
      spec.n = cell.n;
      spec.l = static_cast<int>(cell.l);
      std::ostringstream out;
      out << hash << "," << cell.family << "," << cell.n << "," << fmtg(cell.rho)
          << "," << cell.l << ",";
      // Feasibility can depend on the generation seed (e.g. trimming may
      // strand more degree-1 nodes than there are io slots), so runs fail
      // individually; a cell with no buildable run is reported infeasible.
      std::vector<double> accs;
      for (int run = 0; run < cfg.sweep_runs; ++run) {
        try {
          DagNet net = build_model(spec, run, run);
          TrainConfig tc = base;
          tc.lr = cfg.sweep_lr;
          tc.batch_size = cfg.sweep_bs;
          tc.seed = derive_seed(run, 0x53EEu + cell.n);
          RunRecord rec = train(net, ds, tc);
          accs.push_back(rec.test_accuracy);
        } catch (const InfeasibleError&) {
        } catch (const NotConvergedError&) {
        } catch (const RetriesExhaustedError&) {
        }
      }
      if (!accs.empty()) {
        out << accs.size() << "," << fmtg(mean_of(accs)) << ","
            << fmtg(stddev_of(accs)) << ",ok";
      } else {
        out << 0 << ",,,infeasible";
      }
      return out.str();
    });
  }
  auto lines = run_parallel(jobs, opts.workers);
  summary.trained += static_cast<int>(lines.size());
  append_csv(sweep_path, kSweepHeader, lines);
  summary.outputs.push_back(sweep_path);
  return summary;
}

CommandSummary cmd_robustness(const ExperimentConfig& cfg,
                              const RunOptions& opts) {
  CommandSummary summary;
  const std::string root = out_root(cfg, opts);
  ensure_dir(root);
  const std::string hash = config_hash(cfg);
  const std::string models_dir =
      opts.models_dir.empty() ? root + "/models" : opts.models_dir;

  std::map<std::string, std::vector<std::string>> files_by_family;
  if (fs::is_directory(models_dir)) {
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(models_dir)) {
      const std::string name = entry.path().filename().string();
      if (name.size() > 9 && name.substr(name.size() - 9) == ".net.json")
        paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) {
      const std::string stem = fs::path(p).filename().string();
      const auto cut = stem.rfind("_s");
      if (cut == std::string::npos) continue;
      files_by_family[stem.substr(0, cut)].push_back(p);
    }
  }
  if (files_by_family.empty())
    throw DataError("no model checkpoints (*.net.json) found in " + models_dir);

  Dataset ds = build_dataset(cfg);
  std::vector<std::string> lines;
  std::uint64_t family_idx = 0;
  for (const auto& [family, paths] : files_by_family) {
    std::vector<DagNet> nets;
    for (const auto& p : paths) nets.push_back(load_net(p));
    const auto curve = robustness_curve(
        nets, ds, cfg.robustness_fractions, cfg.robustness_trials,
        derive_seed(0xB0B5u, family_idx++), opts.damage_rescale);
    for (const auto& point : curve) {
      std::ostringstream out;
      out << hash << "," << family << "," << fmtg(point.f) << ","
          << fmtg(point.mean_gain) << "," << fmtg(point.std_gain) << ","
          << cfg.robustness_trials << "," << (opts.damage_rescale ? 1 : 0);
      lines.push_back(out.str());
    }
  }
  const std::string path = root + "/robustness.csv";
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << kRobustnessHeader << "\n";
  for (const auto& l : lines) out << l << "\n";
  summary.outputs.push_back(path);
  return summary;
}

CommandSummary cmd_attributes(const ExperimentConfig& cfg,
                              const RunOptions& opts) {
  CommandSummary summary;
  const std::string root = out_root(cfg, opts);
  ensure_dir(root);
  const std::string hash = config_hash(cfg);
  const std::string dags_dir =
      opts.graphs_dir.empty() ? root + "/dags" : opts.graphs_dir;

  std::vector<std::string> paths;
  if (fs::is_directory(dags_dir)) {
    for (const auto& entry : fs::directory_iterator(dags_dir)) {
      const std::string name = entry.path().filename().string();
      if (name.size() > 9 && name.substr(name.size() - 9) == ".dag.json")
        paths.push_back(entry.path().string());
    }
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty())
    throw DataError("no dag files (*.dag.json) found in " + dags_dir);

  // Optional accuracy join from evaluation rows.
  std::map<std::string, double> accuracy_of;
  std::string results_path =
      opts.results_csv.empty() ? root + "/results.csv" : opts.results_csv;
  if (fs::exists(results_path)) {
    for (const auto& row : load_results_csv(results_path))
      if (row.phase == "eval")
        accuracy_of[row.family + "_s" + std::to_string(row.gen_seed)] =
            row.test_accuracy;
  }

  const std::string path = root + "/attributes.csv";
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << "config_hash,run_id,family,seed,n,l";
  for (const auto& name : AttributeVector::names()) out << "," << name;
  out << ",test_accuracy\n";

  std::vector<AttributeVector> joined_rows;
  std::vector<double> joined_acc;
  for (const auto& p : paths) {
    std::string run_id = fs::path(p).filename().string();
    run_id = run_id.substr(0, run_id.size() - 9);  // strip .dag.json
    const auto cut = run_id.rfind("_s");
    const std::string family =
        cut == std::string::npos ? run_id : run_id.substr(0, cut);
    const std::string seed =
        cut == std::string::npos ? "" : run_id.substr(cut + 2);
    Dag d = load_dag(p);
    const AttributeVector attrs = attributes(d);
    out << hash << "," << run_id << "," << family << "," << seed << ","
        << d.n() << "," << d.base.edge_count();
    for (double v : attrs.values()) out << "," << fmtg(v);
    const auto it = accuracy_of.find(run_id);
    if (it == accuracy_of.end()) {
      if (!accuracy_of.empty())
        std::cerr << "warning: no evaluation accuracy for " << run_id << "\n";
      out << ",";
    } else {
      out << "," << fmtg(it->second);
      joined_rows.push_back(attrs);
      joined_acc.push_back(it->second);
    }
    out << "\n";
  }
  summary.outputs.push_back(path);

  // Accuracy-vs-attribute correlations over the joined rows.
  if (joined_rows.size() >= 2) {
    const std::string cpath = root + "/correlations.csv";
    std::ofstream cout_(cpath);
    if (!cout_) throw DataError("cannot open " + cpath + " for writing");
    cout_ << "config_hash,attribute,pearson,spearman\n";
    for (const auto& c : correlate(joined_rows, joined_acc))
      cout_ << hash << "," << c.name << "," << fmtg(c.pearson) << ","
            << fmtg(c.spearman) << "\n";
    summary.outputs.push_back(cpath);
  }
  return summary;
}

CommandSummary cmd_stats(const ExperimentConfig& cfg, const RunOptions& opts) {
  CommandSummary summary;
  const std::string root = out_root(cfg, opts);
  ensure_dir(root);
  const std::string hash = config_hash(cfg);
  const std::string results_path =
      opts.results_csv.empty() ? root + "/results.csv" : opts.results_csv;

  std::map<std::string, std::vector<double>> acc_by_family;
  for (const auto& row : load_results_csv(results_path)) {
    if (row.config_hash != hash)
      throw ConfigError(results_path +
                        ": contains rows from a different config");
    if (row.phase == "eval") acc_by_family[row.family].push_back(row.test_accuracy);
  }
  std::vector<StatsRowInput> samples;
  for (const auto& family : cfg.families) {
    const auto it = acc_by_family.find(family);
    if (it != acc_by_family.end()) samples.push_back({family, it->second});
  }
  const std::string path = root + "/stats.csv";
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << kStatsHeader << "\n";
  for (const auto& l : stats_rows(samples, cfg.holm, hash)) out << l << "\n";
  summary.outputs.push_back(path);
  return summary;
}

}  // namespace toponet
