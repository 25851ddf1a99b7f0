#include <cstdlib>
#include <filesystem>
#include <unistd.h>
#include <fstream>

#include "doctest.h"

namespace fs = std::filesystem;

TEST_SUITE_BEGIN("cli");

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("toponet_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int counter;
};
int TempDir::counter = 0;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TOPONET_CLI_PATH) + " " + args +
                          " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_config(const fs::path& path, const std::string& extra = "") {
  std::ofstream out(path);
  out << "schema_version = 1\n"
         "dataset.kind = swiss_roll\n"
         "dataset.m = 270\n"
         "dataset.n_classes = 3\n"
         "dataset.n_reps = 1\n"
         "dataset.sigma = 0.0\n"
         "dataset.seed = 3\n"
         "dataset.split = 150 60 60\n"
         "n = 26\n"
         "l = 120\n"
         "families = er mlp-h1\n"
         "lr_grid = 0.01\n"
         "bs_grid = 32\n"
         "hpo_seeds = 0:2\n"
         "eval_seeds = 100:102\n"
         "max_epochs = 10\n"
      << extra;
}

}  // namespace

TEST_CASE("generate exits 0 and writes the expected files") {
  TempDir tmp;
  write_config(tmp.path / "exp.cfg");
  const int rc = run_cli("generate --config " + (tmp.path / "exp.cfg").string() +
                         " --out " + (tmp.path / "out").string());
  CHECK(rc == 0);
  CHECK(fs::exists(tmp.path / "out" / "dags" / "er_s100.dag.json"));
  CHECK(fs::exists(tmp.path / "out" / "graphs" / "mlp-h1_s101.graph.json"));
}

TEST_CASE("experiment then stats and attributes chain through the CLI") {
  TempDir tmp;
  write_config(tmp.path / "exp.cfg");
  const std::string common = " --config " + (tmp.path / "exp.cfg").string() +
                             " --out " + (tmp.path / "out").string() +
                             " --workers 2";
  CHECK(run_cli("experiment" + common) == 0);
  CHECK(fs::exists(tmp.path / "out" / "results.csv"));
  CHECK(fs::exists(tmp.path / "out" / "stats.csv"));
  CHECK(run_cli("generate" + common) == 0);
  CHECK(run_cli("attributes" + common) == 0);
  CHECK(fs::exists(tmp.path / "out" / "attributes.csv"));
  CHECK(run_cli("robustness" + common + " --damage-rescale") == 0);
  CHECK(fs::exists(tmp.path / "out" / "robustness.csv"));
  // resume on a finished experiment trains nothing and exits 0
  CHECK(run_cli("experiment" + common + " --resume") == 0);
}

TEST_CASE("bad config exits 2") {
  TempDir tmp;
  std::ofstream((tmp.path / "bad.cfg").string()) << "unknown_key = 1\n";
  CHECK(run_cli("generate --config " + (tmp.path / "bad.cfg").string()) == 2);
}

TEST_CASE("infeasible generation exits 3 naming the family") {
  TempDir tmp;
  write_config(tmp.path / "exp.cfg", "");
  // l below the spanning-tree minimum for n=26
  std::ofstream out(tmp.path / "bad.cfg");
  out << "schema_version = 1\nn = 26\nl = 10\nfamilies = er\n"
         "dataset.kind = swiss_roll\ndataset.m = 90\ndataset.n_classes = 3\n"
         "dataset.n_reps = 1\ndataset.split = 50 20 20\n";
  out.close();
  const int rc = run_cli("generate --config " + (tmp.path / "bad.cfg").string() +
                         " --out " + (tmp.path / "out").string());
  CHECK(rc == 3);
}

TEST_CASE("missing subcommand or config is a usage error") {
  CHECK(run_cli("") != 0);
  CHECK(run_cli("generate --config /nonexistent.cfg") != 0);
}

TEST_CASE("training failure exits 4") {
  TempDir tmp;
  // lr = 0 passes parsing but violates the training contract
  write_config(tmp.path / "exp.cfg", "");
  std::ofstream out(tmp.path / "zero_lr.cfg");
  out << "schema_version = 1\nn = 26\nl = 120\nfamilies = mlp-h1\n"
         "dataset.kind = swiss_roll\ndataset.m = 90\ndataset.n_classes = 3\n"
         "dataset.n_reps = 1\ndataset.split = 50 20 20\n"
         "lr_grid = 0\nbs_grid = 32\nhpo_seeds = 0:2\neval_seeds = 100:102\n";
  out.close();
  CHECK(run_cli("experiment --config " + (tmp.path / "zero_lr.cfg").string() +
                " --out " + (tmp.path / "out").string()) == 4);
}

TEST_SUITE_END();
