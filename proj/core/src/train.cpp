#include "toponet/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "toponet/errors.hpp"
#include "toponet/jobs.hpp"
#include "toponet/rng.hpp"
#include "toponet/stats.hpp"

namespace toponet {

void Adam::step(DagNet& net, const Gradients& g, double lr) {
  ++t;
  const double c1 = 1.0 - std::pow(beta1, t);
  const double c2 = 1.0 - std::pow(beta2, t);
  for (std::size_t i = 0; i < net.weights.size(); ++i) {
    mw[i] = beta1 * mw[i] + (1.0 - beta1) * g.w[i];
    vw[i] = beta2 * vw[i] + (1.0 - beta2) * g.w[i] * g.w[i];
    net.weights[i] -= lr * (mw[i] / c1) / (std::sqrt(vw[i] / c2) + eps);
  }
  for (std::size_t i = 0; i < net.biases.size(); ++i) {
    mb[i] = beta1 * mb[i] + (1.0 - beta1) * g.b[i];
    vb[i] = beta2 * vb[i] + (1.0 - beta2) * g.b[i] * g.b[i];
    net.biases[i] -= lr * (mb[i] / c1) / (std::sqrt(vb[i] / c2) + eps);
  }
}

double evaluate_loss(const DagNet& net, const SplitView& view) {
  NetWorkspace ws;
  forward(net, view.x.data(), view.count, ws);
  return ce_loss_from_logits(ws.logits, view.count, net.n_out, view.y.data());
}

double evaluate_accuracy(const DagNet& net, const SplitView& view) {
  NetWorkspace ws;
  forward(net, view.x.data(), view.count, ws);
  return accuracy_from_logits(ws.logits, view.count, net.n_out, view.y.data());
}

RunRecord train(DagNet& net, const Dataset& ds, const TrainConfig& cfg) {
  if (net.n_in != ds.dim)
    throw TrainError("input dimension mismatch: net expects " +
                     std::to_string(net.n_in) + ", dataset has " +
                     std::to_string(ds.dim));
  if (net.n_out != ds.n_classes)
    throw TrainError("output dimension mismatch: net expects " +
                     std::to_string(net.n_out) + ", dataset has " +
                     std::to_string(ds.n_classes) + " classes");
  if (ds.train_idx.empty() || ds.val_idx.empty())
    throw TrainError("dataset has no train/validation split");
  if (cfg.lr <= 0 || cfg.batch_size < 1 || cfg.scheduler_patience < 1 ||
      cfg.early_stop_patience < 1)
    throw TrainError("invalid training configuration");

  const auto t_start = std::chrono::steady_clock::now();
  SplitView train_view = gather(ds, ds.train_idx);
  SplitView val_view = gather(ds, ds.val_idx);

  RunRecord rec;
  rec.lr = cfg.lr;
  rec.batch_size = cfg.batch_size;

  Adam opt(net, cfg.beta1, cfg.beta2, cfg.adam_eps);
  Gradients grads;
  NetWorkspace ws;
  Rng shuffle_rng(derive_seed(cfg.seed, 0x5EEDu));

  std::vector<int> order(train_view.count);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> batch_x;
  std::vector<int> batch_y;

  double lr = cfg.lr;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<double> best_w, best_b;
  int since_improve = 0, since_sched = 0;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (int start = 0; start < train_view.count; start += cfg.batch_size) {
      const int bs = std::min(cfg.batch_size, train_view.count - start);
      batch_x.resize(static_cast<std::size_t>(bs) * ds.dim);
      batch_y.resize(bs);
      for (int i = 0; i < bs; ++i) {
        const int src = order[start + i];
        std::copy(train_view.x.begin() + static_cast<std::size_t>(src) * ds.dim,
                  train_view.x.begin() + static_cast<std::size_t>(src + 1) * ds.dim,
                  batch_x.begin() + static_cast<std::size_t>(i) * ds.dim);
        batch_y[i] = train_view.y[src];
      }
      forward(net, batch_x.data(), bs, ws);
      const double loss = backward_ce(net, ws, batch_y.data(), grads);
      if (!std::isfinite(loss))
        throw TrainError("non-finite training loss at epoch " +
                         std::to_string(epoch) + " (lr=" + std::to_string(lr) + ")");
      opt.step(net, grads, lr);
    }

    const double val_loss = evaluate_loss(net, val_view);
    if (!std::isfinite(val_loss))
      throw TrainError("non-finite validation loss at epoch " +
                       std::to_string(epoch));
    rec.val_curve.push_back(val_loss);
    rec.lr_curve.push_back(lr);

    if (val_loss < best_val - cfg.improvement_eps) {
      best_val = val_loss;
      rec.best_epoch = epoch;
      best_w = net.weights;
      best_b = net.biases;
      since_improve = 0;
      since_sched = 0;
    } else {
      ++since_improve;
      ++since_sched;
    }
    if (since_sched >= cfg.scheduler_patience) {
      lr *= cfg.scheduler_factor;
      since_sched = 0;
    }
    rec.epochs_run = epoch + 1;
    if (since_improve >= cfg.early_stop_patience) break;
  }

  // Restore the best-validation checkpoint.
  if (!best_w.empty()) {
    net.weights = best_w;
    net.biases = best_b;
  }
  rec.best_val_loss = best_val;

  if (!ds.test_idx.empty()) {
    SplitView test_view = gather(ds, ds.test_idx);
    rec.test_accuracy = evaluate_accuracy(net, test_view);
  } else {
    rec.test_accuracy = std::numeric_limits<double>::quiet_NaN();
  }
  rec.wall_time_s = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t_start)
                        .count();
  return rec;
}

DagNet build_model(const ModelSpec& spec, std::uint64_t gen_seed,
                   std::uint64_t init_seed) {
  UGraph g = generate_family(spec.family, spec.n, spec.l, spec.n_in,
                             spec.n_out, gen_seed);
  const Ordering ord =
      spec.family.kind == Family::mlp ? Ordering::natural : spec.ordering;
  Dag d = make_dag(g, ord, spec.n_in, spec.n_out, derive_seed(gen_seed, 0xDA6));
  return init_net(d, derive_seed(init_seed, 0x12177));
}

int select_best_cell(const std::vector<GridCell>& cells) {
  if (cells.empty()) throw TrainError("empty hyperparameter grid");
  int best = 0;
  for (int i = 1; i < static_cast<int>(cells.size()); ++i) {
    const auto& c = cells[i];
    const auto& b = cells[best];
    if (c.median_val_loss < b.median_val_loss ||
        (c.median_val_loss == b.median_val_loss &&
         (c.lr < b.lr || (c.lr == b.lr && c.batch_size < b.batch_size))))
      best = i;
  }
  return best;
}

GridSearchResult grid_search(const ModelSpec& spec, const Dataset& ds,
                             const std::vector<double>& lr_grid,
                             const std::vector<int>& bs_grid,
                             const std::vector<std::uint64_t>& seeds,
                             const TrainConfig& base, int workers) {
  if (lr_grid.empty() || bs_grid.empty())
    throw TrainError("grid_search: empty grid");
  if (seeds.empty()) throw TrainError("grid_search: no seeds");

  struct Job {
    double lr;
    int bs;
    std::uint64_t seed;
    std::uint64_t cell;  // grid cell index, for shuffle-seed derivation
  };
  std::vector<Job> layout;
  std::uint64_t cell = 0;
  for (double lr : lr_grid)
    for (int bs : bs_grid) {
      for (std::uint64_t s : seeds) layout.push_back({lr, bs, s, cell});
      ++cell;
    }

  std::vector<std::function<RunRecord()>> jobs;
  jobs.reserve(layout.size());
  for (const Job& job : layout) {
    jobs.push_back([&spec, &ds, &base, job]() {
      DagNet net = build_model(spec, job.seed, job.seed);
      TrainConfig cfg = base;
      cfg.lr = job.lr;
      cfg.batch_size = job.bs;
      cfg.seed = derive_seed(job.seed, 0xC311u + job.cell);
      RunRecord rec = train(net, ds, cfg);
      rec.family = spec.family.name;
      rec.gen_seed = job.seed;
      rec.init_seed = job.seed;
      return rec;
    });
  }
  GridSearchResult result;
  result.runs = run_parallel(jobs, workers);

  std::size_t at = 0;
  for (double lr : lr_grid) {
    for (int bs : bs_grid) {
      std::vector<double> losses;
      for (std::size_t s = 0; s < seeds.size(); ++s)
        losses.push_back(result.runs[at + s].best_val_loss);
      at += seeds.size();
      result.cells.push_back({lr, bs, median_of(losses)});
    }
  }
  const int best = select_best_cell(result.cells);
  result.best_lr = result.cells[best].lr;
  result.best_batch_size = result.cells[best].batch_size;
  return result;
}

EvalResult evaluate_topology(const ModelSpec& spec, const Dataset& ds,
                             double lr, int batch_size,
                             const std::vector<std::uint64_t>& seeds,
                             const TrainConfig& base, int workers,
                             bool keep_nets) {
  if (seeds.empty()) throw TrainError("evaluate_topology: no seeds");
  struct Outcome {
    RunRecord rec;
    DagNet net;
  };
  std::vector<std::function<Outcome()>> jobs;
  jobs.reserve(seeds.size());
  for (std::uint64_t s : seeds) {
    jobs.push_back([&spec, &ds, &base, lr, batch_size, s, keep_nets]() {
      DagNet net = build_model(spec, s, s);
      TrainConfig cfg = base;
      cfg.lr = lr;
      cfg.batch_size = batch_size;
      cfg.seed = derive_seed(s, 0xE7A1u);
      Outcome out;
      out.rec = train(net, ds, cfg);
      out.rec.family = spec.family.name;
      out.rec.gen_seed = s;
      out.rec.init_seed = s;
      if (keep_nets) out.net = std::move(net);
      return out;
    });
  }
  auto outcomes = run_parallel(jobs, workers);
  EvalResult result;
  for (auto& o : outcomes) {
    result.accuracies.push_back(o.rec.test_accuracy);
    result.runs.push_back(std::move(o.rec));
    if (keep_nets) result.nets.push_back(std::move(o.net));
  }
  result.mean_accuracy = mean_of(result.accuracies);
  result.std_accuracy = stddev_of(result.accuracies);
  return result;
}

}  // namespace toponet
