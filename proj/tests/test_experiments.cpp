#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ganloc/experiments.hpp"
#include "ganloc/report.hpp"

using namespace ganloc;
namespace fs = std::filesystem;

namespace {

// Two well-separated 2-D clusters, 40 samples each: cheap to train on and
// easy to classify, so experiment plumbing is what gets exercised.
Dataset two_cluster_toy() {
  Dataset ds;
  ds.class_count = 2;
  ds.feature_count = 2;
  Rng rng(7);
  for (int i = 0; i < 40; ++i) {
    RowVector a = rng.normal_matrix(1, 2);
    a.array() += 4.0;
    RowVector b = rng.normal_matrix(1, 2);
    b.array() -= 4.0;
    ds.samples.push_back({a, 1});
    ds.samples.push_back({b, 2});
  }
  return ds;
}

ExperimentSpec tiny_spec() {
  ExperimentSpec spec;
  spec.real_fractions = {0.5, 1.0};
  spec.synthetic_counts = {0, 8};
  spec.repetitions = 2;
  spec.master_seed = 99;
  spec.classifier.layer_sizes = {2, 8, 8, 8, 4, 4, 2};
  spec.classifier.epochs = 12;
  spec.gan.latent_dim = 2;
  spec.gan.generator_sizes = {2, 8, 2};
  spec.gan.discriminator_sizes = {2, 8, 1};
  spec.gan.iterations = 30;
  spec.gan.minibatch = 8;
  spec.top_up_target = 20;
  return spec;
}

bool same_records(const std::vector<RunRecord>& a,
                  const std::vector<RunRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].experiment != b[i].experiment) return false;
    if (a[i].variant != b[i].variant) return false;
    if (a[i].real_fraction != b[i].real_fraction) return false;
    if (a[i].synthetic_count != b[i].synthetic_count) return false;
    if (a[i].rep != b[i].rep) return false;
    if (a[i].run_seed != b[i].run_seed) return false;
    if (a[i].accuracy != b[i].accuracy) return false;
    if (a[i].log_loss != b[i].log_loss) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("allocate_total splits evenly with remainder to low classes") {
  CHECK(allocate_total(1000, 4) == std::vector<long>{250, 250, 250, 250});
  CHECK(allocate_total(250, 4) == std::vector<long>{63, 63, 62, 62});
  CHECK(allocate_total(5, 4) == std::vector<long>{2, 1, 1, 1});
  CHECK(allocate_total(0, 4) == std::vector<long>{0, 0, 0, 0});
  CHECK(allocate_total(7, 1) == std::vector<long>{7});
  CHECK_THROWS_AS(allocate_total(-1, 4), ConfigError);
}

TEST_CASE("aggregate computes the textbook statistics") {
  std::vector<RunRecord> records(2);
  records[0].experiment = records[1].experiment = "table1";
  records[0].variant = records[1].variant = "real_only";
  records[0].real_fraction = records[1].real_fraction = 0.1;
  records[0].synthetic_count = records[1].synthetic_count = 0;
  records[0].accuracy = 90.0;
  records[1].accuracy = 94.0;
  records[0].log_loss = 1.0;
  records[1].log_loss = 3.0;
  std::vector<CellStats> cells = aggregate(records);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].mean_accuracy == 92.0);
  CHECK(cells[0].std_accuracy == 2.0);
  CHECK(cells[0].min_accuracy == 90.0);
  CHECK(cells[0].max_accuracy == 94.0);
  CHECK(cells[0].mean_log_loss == 2.0);
  CHECK(cells[0].runs == 2);
}

TEST_CASE("a single record aggregates with zero std") {
  std::vector<RunRecord> one(1);
  one[0].experiment = "sweep";
  one[0].variant = "augmented";
  one[0].accuracy = 77.0;
  std::vector<CellStats> cells = aggregate(one);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].std_accuracy == 0.0);
  CHECK(cells[0].mean_accuracy == 77.0);
  CHECK(cells[0].min_accuracy == cells[0].max_accuracy);
}

TEST_CASE("aggregate of 100 records matches brute re-summation") {
  std::vector<RunRecord> records(100);
  Rng rng(5);
  double sum = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].experiment = "table1";
    records[i].variant = "augmented";
    records[i].real_fraction = 0.1;
    records[i].synthetic_count = 500;
    records[i].accuracy = 60.0 + 40.0 * rng.uniform();
    records[i].log_loss = rng.uniform();
    sum += records[i].accuracy;
  }
  std::vector<CellStats> cells = aggregate(records);
  REQUIRE(cells.size() == 1);
  CHECK(std::abs(cells[0].mean_accuracy - sum / 100.0) < 1e-12);
  CHECK(cells[0].mean_accuracy >= cells[0].min_accuracy);
  CHECK(cells[0].mean_accuracy <= cells[0].max_accuracy);
  CHECK(cells[0].std_accuracy >= 0.0);
}

TEST_CASE("aggregate rejects an empty record list") {
  CHECK_THROWS_AS(aggregate({}), DataError);
}

TEST_CASE("table grid produces one cell per fraction x count") {
  Dataset ds = two_cluster_toy();
  ExperimentSpec spec = tiny_spec();
  ExperimentReport report = run_table1(ds, spec);
  CHECK(report.cells.size() == 4);  // 2 fractions x 2 counts
  CHECK(report.records.size() == 8);
  CHECK(report.failures.empty());
  for (const CellStats& c : report.cells) {
    CHECK(c.runs == spec.repetitions);
    CHECK(c.mean_accuracy >= c.min_accuracy);
    CHECK(c.mean_accuracy <= c.max_accuracy);
    CHECK(c.mean_accuracy >= 0.0);
    CHECK(c.mean_accuracy <= 100.0);
  }
  // records carry the documented seed derivation
  for (const RunRecord& r : report.records) {
    CHECK(r.run_seed ==
          job_seed(spec.master_seed, r.real_fraction, r.rep));
  }
}

TEST_CASE("identical spec and seed reproduce the report exactly") {
  Dataset ds = two_cluster_toy();
  ExperimentSpec spec = tiny_spec();
  ExperimentReport a = run_table1(ds, spec);
  ExperimentReport b = run_table1(ds, spec);
  CHECK(same_records(a.records, b.records));
}

TEST_CASE("worker count does not change the report") {
  Dataset ds = two_cluster_toy();
  ExperimentSpec spec = tiny_spec();
  ExperimentReport serial = run_table1(ds, spec);
  spec.workers = 3;
  ExperimentReport parallel = run_table1(ds, spec);
  CHECK(same_records(serial.records, parallel.records));
}

TEST_CASE("sweep curves coincide exactly when nothing is added") {
  Dataset ds = two_cluster_toy();
  ExperimentSpec spec = tiny_spec();
  ExperimentReport report = run_fraction_sweep(ds, spec);
  // 2 fractions x 2 variants
  CHECK(report.cells.size() == 4);
  // fraction 1.0: subsample == train half == 20 per class == top_up_target,
  // so the augmented run trains on the identical set with the same seed.
  const CellStats* real_full = nullptr;
  const CellStats* aug_full = nullptr;
  for (const CellStats& c : report.cells) {
    if (c.real_fraction == 1.0 && c.variant == "real_only") real_full = &c;
    if (c.real_fraction == 1.0 && c.variant == "augmented") aug_full = &c;
  }
  REQUIRE(real_full != nullptr);
  REQUIRE(aug_full != nullptr);
  CHECK(aug_full->synthetic_count == 0);
  CHECK(real_full->mean_accuracy == aug_full->mean_accuracy);
  CHECK(real_full->mean_log_loss == aug_full->mean_log_loss);
}

TEST_CASE("sweep top-up adds the complement of the subsample") {
  Dataset ds = two_cluster_toy();
  ExperimentSpec spec = tiny_spec();
  ExperimentReport report = run_fraction_sweep(ds, spec);
  for (const RunRecord& r : report.records) {
    if (r.variant == "augmented" && r.real_fraction == 0.5) {
      // 10 of 20 per class present, topped up to 20: 10 x 2 classes
      CHECK(r.synthetic_count == 20);
      CHECK(r.interpretation == "top_up");
    }
  }
}

TEST_CASE("experiment spec validation") {
  ExperimentSpec spec = tiny_spec();
  spec.real_fractions = {0.0};
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = tiny_spec();
  spec.repetitions = 0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = tiny_spec();
  spec.synthetic_counts = {-5};
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = tiny_spec();
  spec.synthetic_counts.clear();
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = tiny_spec();
  spec.workers = 0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("csv writers emit the documented columns") {
  Dataset ds = two_cluster_toy();
  ExperimentSpec spec = tiny_spec();
  ExperimentReport report = run_table1(ds, spec);

  fs::path dir = fs::temp_directory_path();
  fs::path runs_path = dir / "ganloc_runs.csv";
  fs::path cells_path = dir / "ganloc_cells.csv";
  write_runs_csv(runs_path, report.records);
  write_cells_csv(cells_path, report.cells);

  std::ifstream runs(runs_path);
  std::string header;
  std::getline(runs, header);
  CHECK(header ==
        "experiment,variant,real_fraction,synthetic_count,interpretation,"
        "rep,run_seed,accuracy,log_loss,wall_ms");
  int rows = 0;
  std::string line;
  while (std::getline(runs, line)) ++rows;
  CHECK(rows == 8);

  std::ifstream cells(cells_path);
  std::getline(cells, header);
  CHECK(header ==
        "experiment,variant,real_fraction,synthetic_count,runs,"
        "mean_accuracy,std_accuracy,min_accuracy,max_accuracy,"
        "mean_log_loss,std_log_loss,min_log_loss,max_log_loss");
  rows = 0;
  while (std::getline(cells, line)) {
    ++rows;
    CHECK(line.find("wall") == std::string::npos);
  }
  CHECK(rows == 4);
  fs::remove(runs_path);
  fs::remove(cells_path);
}

TEST_CASE("aggregated csv is byte-stable for the same report") {
  Dataset ds = two_cluster_toy();
  ExperimentSpec spec = tiny_spec();
  ExperimentReport a = run_table1(ds, spec);
  ExperimentReport b = run_table1(ds, spec);
  fs::path pa = fs::temp_directory_path() / "ganloc_cells_a.csv";
  fs::path pb = fs::temp_directory_path() / "ganloc_cells_b.csv";
  write_cells_csv(pa, a.cells);
  write_cells_csv(pb, b.cells);
  std::ifstream fa(pa), fb(pb);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(!sa.str().empty());
  fs::remove(pa);
  fs::remove(pb);
}

TEST_CASE("markdown table and sweep svg render") {
  Dataset ds = two_cluster_toy();
  ExperimentSpec spec = tiny_spec();
  ExperimentReport table = run_table1(ds, spec);
  ExperimentReport sweep = run_fraction_sweep(ds, spec);

  fs::path md = fs::temp_directory_path() / "ganloc_table.md";
  write_table_markdown(md, table.cells);
  std::ifstream md_in(md);
  std::stringstream md_text;
  md_text << md_in.rdbuf();
  CHECK(md_text.str().find("| Synthetic |") != std::string::npos);
  CHECK(md_text.str().find("50% real acc") != std::string::npos);

  fs::path svg = fs::temp_directory_path() / "ganloc_sweep.svg";
  write_sweep_svg(svg, sweep.cells);
  std::ifstream svg_in(svg);
  std::stringstream svg_text;
  svg_text << svg_in.rdbuf();
  CHECK(svg_text.str().find("<svg") != std::string::npos);
  CHECK(svg_text.str().find("polyline") != std::string::npos);
  CHECK(svg_text.str().find("real_only") != std::string::npos);
  CHECK(svg_text.str().find("augmented") != std::string::npos);
  fs::remove(md);
  fs::remove(svg);
}
