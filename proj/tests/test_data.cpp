#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "ganloc/dataset.hpp"
#include "ganloc/rng.hpp"
#include "ganloc/standardize.hpp"

using namespace ganloc;
namespace fs = std::filesystem;

namespace {

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& name, const std::string& content) {
    path = fs::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::error_code ec; fs::remove(path, ec); }
};

// Two samples per class across 4 classes; the smallest even split case.
Dataset toy8() {
  Dataset ds;
  ds.class_count = 4;
  ds.feature_count = 2;
  for (int c = 1; c <= 4; ++c) {
    for (int k = 0; k < 2; ++k) {
      RowVector v(2);
      v << c * 10.0 + k, -c * 5.0;
      ds.samples.push_back({v, c});
    }
  }
  return ds;
}

}  // namespace

TEST_CASE("load_dataset parses a canonical-format line") {
  TempFile f("ganloc_line.tsv", "-64\t-56\t-61\t-66\t-71\t-82\t-81\t1\n");
  Dataset ds = load_dataset(f.path);
  REQUIRE(ds.samples.size() == 1);
  CHECK(ds.feature_count == 7);
  CHECK(ds.samples[0].label == 1);
  const double expected[] = {-64, -56, -61, -66, -71, -82, -81};
  for (Index j = 0; j < 7; ++j) {
    CHECK(ds.samples[0].rss(j) == expected[j]);
  }
}

TEST_CASE("load_dataset accepts the comma fallback") {
  TempFile f("ganloc_csv.csv", "-64,-56,-61,-66,-71,-82,-81,2\n");
  Dataset ds = load_dataset(f.path);
  CHECK(ds.samples[0].label == 2);
  CHECK(ds.feature_count == 7);
}

TEST_CASE("load_dataset rejects an empty file") {
  TempFile f("ganloc_empty.tsv", "");
  CHECK_THROWS_AS(load_dataset(f.path), DataError);
}

TEST_CASE("load_dataset reports the offending line number") {
  TempFile f("ganloc_bad.tsv",
             "-64\t-56\t-61\t-66\t-71\t-82\t-81\t1\n"
             "-64\t-56\t-61\t-66\t-71\t-82\t1\n");
  CHECK_THROWS_WITH_AS(load_dataset(f.path), doctest::Contains(":2"),
                       DataError);
}

TEST_CASE("load_dataset rejects non-numeric fields and bad labels") {
  TempFile f1("ganloc_nan.tsv", "-64\tx\t-61\t-66\t-71\t-82\t-81\t1\n");
  CHECK_THROWS_AS(load_dataset(f1.path), DataError);
  TempFile f2("ganloc_lbl.tsv", "-64\t-56\t-61\t-66\t-71\t-82\t-81\t0\n");
  CHECK_THROWS_AS(load_dataset(f2.path), DataError);
}

TEST_CASE("stratified_split halves every class") {
  Dataset ds = toy8();
  Rng rng(3);
  SplitResult split = stratified_split(ds, rng);
  CHECK(split.train.size() == 4);
  CHECK(split.test.size() == 4);
  for (const auto& [label, count] : split.train.per_class_counts()) {
    CHECK(count == 1);
  }
  for (const auto& [label, count] : split.test.per_class_counts()) {
    CHECK(count == 1);
  }
}

TEST_CASE("stratified_split is a partition of the input") {
  Dataset ds = toy8();
  Rng rng(17);
  SplitResult split = stratified_split(ds, rng);
  std::set<std::size_t> seen;
  for (std::size_t i : split.train_indices) seen.insert(i);
  for (std::size_t i : split.test_indices) seen.insert(i);
  CHECK(seen.size() == ds.size());
  CHECK(*seen.rbegin() == ds.size() - 1);
}

TEST_CASE("stratified_split membership varies with the seed") {
  Dataset ds;
  ds.class_count = 1;
  ds.feature_count = 1;
  for (int i = 0; i < 40; ++i) {
    RowVector v(1);
    v << i;
    ds.samples.push_back({v, 1});
  }
  Rng r1(1), r2(2);
  SplitResult a = stratified_split(ds, r1);
  SplitResult b = stratified_split(ds, r2);
  CHECK(a.train_indices != b.train_indices);
  CHECK(a.train.size() == b.train.size());
}

TEST_CASE("stratified_split rejects odd class counts") {
  Dataset ds = toy8();
  ds.samples.pop_back();
  Rng rng(3);
  CHECK_THROWS_WITH_AS(stratified_split(ds, rng), doctest::Contains("odd"),
                       DataError);
}

TEST_CASE("split manifest lists every sample once with its side") {
  Dataset ds = toy8();
  Rng rng(5);
  SplitResult split = stratified_split(ds, rng);
  TempFile f("ganloc_manifest.csv", "");
  write_split_manifest(f.path, split);
  std::ifstream in(f.path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "sample_index,split,class");
  std::size_t rows = 0, train_rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find(",train,") != std::string::npos) ++train_rows;
  }
  CHECK(rows == ds.size());
  CHECK(train_rows == split.train.size());
}

TEST_CASE("standardizer reproduces the hand-computed column") {
  Dataset ds;
  ds.class_count = 1;
  ds.feature_count = 1;
  for (double v : {-60.0, -50.0, -40.0}) {
    RowVector r(1);
    r << v;
    ds.samples.push_back({r, 1});
  }
  Standardizer s = Standardizer::fit(ds);
  CHECK(s.mean()(0) == doctest::Approx(-50.0).epsilon(1e-12));
  CHECK(s.stddev()(0) == doctest::Approx(8.1649658092772608).epsilon(1e-12));
  Matrix z = s.apply(ds.features());
  CHECK(z(0, 0) == doctest::Approx(-1.2247448713915889).epsilon(1e-10));
  CHECK(z(1, 0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(z(2, 0) == doctest::Approx(1.2247448713915889).epsilon(1e-10));
}

TEST_CASE("standardizer is a fixed point on already-standard data") {
  Dataset ds;
  ds.class_count = 1;
  ds.feature_count = 1;
  // mean 0, population std exactly 1
  for (double v : {-1.0, 0.0, 0.0, 1.0}) {
    RowVector r(1);
    r << v * std::sqrt(2.0);
    ds.samples.push_back({r, 1});
  }
  Standardizer s = Standardizer::fit(ds);
  Matrix z = s.apply(ds.features());
  CHECK((z - ds.features()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("invert after apply is the identity") {
  Rng rng(9);
  Dataset ds;
  ds.class_count = 1;
  ds.feature_count = 5;
  Matrix x = rng.normal_matrix(20, 5) * 13.0;
  x.rowwise() += RowVector::Constant(5, -55.0);
  for (Index i = 0; i < x.rows(); ++i) {
    ds.samples.push_back({x.row(i), 1});
  }
  Standardizer s = Standardizer::fit(ds);
  Matrix round_trip = s.invert(s.apply(x));
  CHECK((round_trip - x).cwiseAbs().maxCoeff() < 1e-9);
  // applied training features are centered and unit-scaled
  Matrix z = s.apply(x);
  CHECK(z.colwise().mean().cwiseAbs().maxCoeff() < 1e-9);
  Matrix c = z.rowwise() - RowVec<Scalar>(z.colwise().mean());
  RowVector var = c.array().square().colwise().sum() / Scalar(z.rows());
  CHECK((var.array() - 1.0).abs().maxCoeff() < 1e-9);
}

TEST_CASE("constant columns fall back to unit scale with a record") {
  Dataset ds;
  ds.class_count = 1;
  ds.feature_count = 2;
  for (double v : {1.0, 2.0, 3.0}) {
    RowVector r(2);
    r << v, -42.0;
    ds.samples.push_back({r, 1});
  }
  Standardizer s = Standardizer::fit(ds);
  REQUIRE(s.constant_columns().size() == 1);
  CHECK(s.constant_columns()[0] == 1);
  CHECK(s.stddev()(1) == 1.0);
  Matrix z = s.apply(ds.features());
  CHECK(z(0, 1) == 0.0);
}

TEST_CASE("standardizer round-trips through its file format") {
  Dataset ds = toy8();
  Standardizer s = Standardizer::fit(ds);
  fs::path p = fs::temp_directory_path() / "ganloc_std.json";
  s.save(p);
  Standardizer t = Standardizer::load(p);
  CHECK((t.mean() - s.mean()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((t.stddev() - s.stddev()).cwiseAbs().maxCoeff() == 0.0);
  fs::remove(p);
}

TEST_CASE("one_hot basics") {
  RowVector v = one_hot(2, 4);
  CHECK(v(0) == 0.0);
  CHECK(v(1) == 1.0);
  CHECK(v(2) == 0.0);
  CHECK(v(3) == 0.0);
  RowVector first = one_hot(1, 4);
  CHECK(first(0) == 1.0);
  CHECK(first.sum() == 1.0);
  CHECK_THROWS_AS(one_hot(5, 4), DataError);
  CHECK_THROWS_AS(one_hot(0, 4), DataError);
}

TEST_CASE("subsample_fraction rounds half up per class") {
  Dataset ds;
  ds.class_count = 2;
  ds.feature_count = 1;
  for (int c = 1; c <= 2; ++c) {
    for (int i = 0; i < 250; ++i) {
      RowVector v(1);
      v << i;
      ds.samples.push_back({v, c});
    }
  }
  Rng rng(11);
  Dataset five = subsample_fraction(ds, 0.05, rng);
  for (const auto& [label, count] : five.per_class_counts()) {
    CHECK(count == 13);
  }
  Dataset ten = subsample_fraction(ds, 0.10, rng);
  for (const auto& [label, count] : ten.per_class_counts()) {
    CHECK(count == 25);
  }
}

TEST_CASE("subsample_fraction at 1.0 returns the dataset unchanged") {
  Dataset ds = toy8();
  Rng rng(13);
  Dataset out = subsample_fraction(ds, 1.0, rng);
  REQUIRE(out.size() == ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(out.samples[i].label == ds.samples[i].label);
    CHECK((out.samples[i].rss.array() == ds.samples[i].rss.array()).all());
  }
}

TEST_CASE("subsample_fraction rejects bad fractions") {
  Dataset ds = toy8();
  Rng rng(13);
  CHECK_THROWS_AS(subsample_fraction(ds, 0.0, rng), ConfigError);
  CHECK_THROWS_AS(subsample_fraction(ds, 1.5, rng), ConfigError);
  CHECK_THROWS_AS(subsample_fraction(ds, -0.1, rng), ConfigError);
  // 2 per class * 0.1 rounds to 0
  CHECK_THROWS_AS(subsample_fraction(ds, 0.1, rng), ConfigError);
}

TEST_CASE("class_matrix extracts the class block") {
  Dataset ds = toy8();
  ClassMatrix cm = class_matrix(ds, 3);
  CHECK(cm.class_id == 3);
  CHECK(cm.values.rows() == 2);
  CHECK(cm.values.cols() == 2);
  CHECK(cm.values(0, 0) == 30.0);
  CHECK_THROWS_AS(class_matrix(ds, 9), DataError);

  Dataset single;
  single.class_count = 1;
  single.feature_count = 3;
  RowVector v(3);
  v << 1, 2, 3;
  single.samples.push_back({v, 1});
  ClassMatrix one = class_matrix(single, 1);
  CHECK(one.values.rows() == 1);
  CHECK(one.values.cols() == 3);
}

TEST_CASE("pipeline determinism: same seed, same split and subsample") {
  Dataset ds;
  ds.class_count = 2;
  ds.feature_count = 1;
  for (int c = 1; c <= 2; ++c) {
    for (int i = 0; i < 100; ++i) {
      RowVector v(1);
      v << c * 1000 + i;
      ds.samples.push_back({v, c});
    }
  }
  auto run = [&ds]() {
    Rng rng(12345);
    SplitResult split = stratified_split(ds, rng);
    Dataset sub = subsample_fraction(split.train, 0.1, rng);
    return std::make_pair(split.train_indices, sub.features());
  };
  auto [idx1, f1] = run();
  auto [idx2, f2] = run();
  CHECK(idx1 == idx2);
  CHECK((f1.array() == f2.array()).all());
}

TEST_CASE("dataset round-trips through save_dataset") {
  Dataset ds = toy8();
  fs::path p = fs::temp_directory_path() / "ganloc_roundtrip.tsv";
  save_dataset(p, ds);
  Dataset back = load_dataset(p);
  REQUIRE(back.size() == ds.size());
  CHECK(back.class_count == ds.class_count);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(back.samples[i].label == ds.samples[i].label);
    CHECK((back.samples[i].rss - ds.samples[i].rss).cwiseAbs().maxCoeff() ==
          0.0);
  }
  fs::remove(p);
}
