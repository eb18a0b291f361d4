#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

// End-to-end checks of the installed command-line binary. The paths come in
// from the build system so the suite works from any working directory.
namespace fs = std::filesystem;

namespace {

const char* kCli = GANLOC_CLI_PATH;
const char* kBench = GANLOC_BENCH_PATH;

// Runs the CLI with the given arguments, quietly, and returns its exit code.
int run(const std::string& args) {
  const std::string cmd =
      std::string(kCli) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

long line_count(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  long n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

// Fresh scratch directory per test case.
fs::path workspace(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ganloc-cli-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string base_args(const fs::path& ws) {
  return "--dataset " + std::string(kBench) + " --output-dir " +
         ws.string() + " ";
}

}  // namespace

TEST_CASE("usage and error exit codes") {
  const fs::path ws = workspace("usage");
  CHECK(run("--help") == 0);
  CHECK(run("split --no-such-flag") == 1);
  CHECK(run("") == 1);  // a subcommand is required
  CHECK(run("--dataset /no/such/file.tsv split") == 2);
  CHECK(run("--config /no/such/config.json split") == 1);
}

TEST_CASE("split writes both halves and a manifest") {
  const fs::path ws = workspace("split");
  CHECK(run(base_args(ws) + "--tag t split") == 0);
  const fs::path dir = ws / "split" / "t";
  CHECK(line_count(dir / "train.tsv") == 1000);
  CHECK(line_count(dir / "test.tsv") == 1000);
  CHECK(fs::exists(dir / "manifest.csv"));
}

TEST_CASE("train-gan then generate round trip") {
  const fs::path ws = workspace("gan");
  CHECK(run(base_args(ws) +
            "--tag g train-gan --fraction 0.1 --gan-iterations 40") == 0);
  const fs::path models = ws / "train-gan" / "g";
  for (int c = 1; c <= 4; ++c) {
    CHECK(fs::exists(models / ("gan_class" + std::to_string(c) + ".txt")));
  }
  CHECK(fs::exists(models / "standardizer.json"));

  CHECK(run(base_args(ws) + "--tag s generate --models-dir " +
            models.string() + " --class 2 --count 12") == 0);
  const fs::path out = ws / "generate" / "s";
  CHECK(line_count(out / "synthetic.tsv") == 12);
  // every row carries the requested class label
  std::ifstream tsv(out / "synthetic.tsv");
  std::string line;
  while (std::getline(tsv, line)) {
    CHECK(line.substr(line.rfind('\t') + 1) == "2");
  }
  const std::string manifest = slurp(out / "synthetic.json");
  CHECK(manifest.find("\"class\": 2") != std::string::npos);
  CHECK(manifest.find("\"count\": 12") != std::string::npos);

  CHECK(run(base_args(ws) + "generate --model " +
            (models / "gan_class9.txt").string() + " --count 5") == 2);
}

TEST_CASE("train-classifier and evaluate round trip") {
  const fs::path ws = workspace("clf");
  REQUIRE(run(base_args(ws) + "--tag t split") == 0);
  const fs::path split_dir = ws / "split" / "t";

  CHECK(run(base_args(ws) + "--tag c train-classifier --train " +
            (split_dir / "train.tsv").string() + " --epochs 2") == 0);
  const fs::path model_dir = ws / "train-classifier" / "c";
  CHECK(fs::exists(model_dir / "classifier.txt"));
  CHECK(line_count(model_dir / "loss_trace.csv") == 3);  // header + 2 epochs

  CHECK(run(base_args(ws) + "--tag e evaluate --model " +
            (model_dir / "classifier.txt").string() + " --test " +
            (split_dir / "test.tsv").string() + " --standardizer " +
            (model_dir / "standardizer.json").string()) == 0);
  const std::string eval_csv = slurp(ws / "evaluate" / "e" / "evaluation.csv");
  CHECK(eval_csv.find("metric,value") != std::string::npos);
  CHECK(eval_csv.find("accuracy,") != std::string::npos);
  CHECK(eval_csv.find("log_loss,") != std::string::npos);
  CHECK(eval_csv.find("confusion_4_4,") != std::string::npos);

  CHECK(run(base_args(ws) + "evaluate --model /no/such/model.txt --test " +
            (split_dir / "test.tsv").string()) == 2);
}

TEST_CASE("table1 reruns with one seed are byte-identical") {
  const fs::path ws = workspace("table1");
  const std::string grid =
      "table1 --reps 2 --fractions 1 --counts 0 --epochs 2";
  CHECK(run(base_args(ws) + "--seed 7 --tag a " + grid) == 0);
  CHECK(run(base_args(ws) + "--seed 7 --tag b " + grid) == 0);
  const std::string a = slurp(ws / "table1" / "a" / "cells.csv");
  const std::string b = slurp(ws / "table1" / "b" / "cells.csv");
  CHECK(a == b);
  CHECK(a.find("mean_accuracy") != std::string::npos);

  CHECK(run(base_args(ws) + "--seed 8 --tag c " + grid) == 0);
  CHECK(slurp(ws / "table1" / "c" / "cells.csv") != a);
}

TEST_CASE("sweep emits cells and a chart") {
  const fs::path ws = workspace("sweep");
  CHECK(run(base_args(ws) +
            "--tag s sweep --step 50 --reps 1 --epochs 2 "
            "--gan-iterations 40") == 0);
  const fs::path dir = ws / "sweep" / "s";
  // two fractions x two variants, plus the header
  CHECK(line_count(dir / "cells.csv") == 5);
  CHECK(slurp(dir / "sweep.svg").find("<svg") != std::string::npos);
}
