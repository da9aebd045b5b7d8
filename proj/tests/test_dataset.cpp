#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "hydra/dataset.hpp"
#include "synthetic.hpp"

using namespace hydra;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& contents)
      : path((std::filesystem::temp_directory_path() / name).string()) {
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE_BEGIN("dataset");

TEST_CASE("tsv loads with dense sorted labels") {
  TempFile f("hydra_t1.tsv", "1\t0.0\t1.0\t2.0\n2\t3.0\t4.0\t5.0\n");
  auto d = load_dataset(f.path);
  CHECK(d.length == 3);
  CHECK(d.n() == 2);
  CHECK(d.labels == std::vector<int>{0, 1});
  CHECK(d.class_names == std::vector<std::string>{"1", "2"});
  CHECK(d.series(0)[2] == 2.0);
}

TEST_CASE("ts format parses values and string label") {
  TempFile f("hydra_t2.ts",
             "@problemName toy\n# a comment\n0.5,0.1,0.9:bird\n1.5,1.1,1.9:cat\n");
  auto d = load_dataset(f.path);
  CHECK(d.length == 3);
  CHECK(d.series(0)[0] == 0.5);
  CHECK(d.class_names == std::vector<std::string>{"bird", "cat"});
}

TEST_CASE("numeric labels sort numerically") {
  TempFile f("hydra_t3.tsv", "10\t1\t2\n2\t3\t4\n1\t5\t6\n");
  auto d = load_dataset(f.path);
  CHECK(d.class_names == std::vector<std::string>{"1", "2", "10"});
}

TEST_CASE("ragged rows rejected") {
  TempFile f("hydra_t4.tsv",
             "1\t1\t2\t3\t4\t5\t6\t7\t8\t9\t10\n2\t1\t2\t3\t4\t5\t6\t7\t8\t9\t10\t11\n");
  CHECK_THROWS_AS(load_dataset(f.path), Error);
  try {
    load_dataset(f.path);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::length_mismatch);
  }
}

TEST_CASE("unparseable value carries its line number") {
  TempFile f("hydra_t5.tsv", "1\t1.0\t2.0\n2\t1.0\txyz\n");
  try {
    load_dataset(f.path);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("non-finite values rejected") {
  TempFile f("hydra_t6.tsv", "1\t1.0\tnan\n2\t1.0\t2.0\n");
  CHECK_THROWS_AS(load_dataset(f.path), Error);
}

TEST_CASE("single class rejected") {
  TempFile f("hydra_t7.tsv", "1\t1.0\t2.0\n1\t3.0\t4.0\n");
  try {
    load_dataset(f.path);
    FAIL("expected DegenerateLabels");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_labels);
  }
}

TEST_CASE("unlabeled file loads without labels; mixing is rejected") {
  TempFile f("hydra_t8.tsv", "?\t1.0\t2.0\n?\t3.0\t4.0\n");
  auto d = load_dataset(f.path);
  CHECK_FALSE(d.labeled());
  CHECK(d.n() == 2);

  TempFile g("hydra_t9.tsv", "?\t1.0\t2.0\n1\t3.0\t4.0\n");
  CHECK_THROWS_AS(load_dataset(g.path), Error);
}

TEST_CASE("load-write-load round-trips bit for bit") {
  auto d = synth::random_dataset(6, 23, 99, 3);
  auto tmp = (std::filesystem::temp_directory_path() / "hydra_rt.ts").string();
  save_dataset(d, tmp);
  auto d1 = load_dataset(tmp);
  save_dataset(d1, tmp);
  auto d2 = load_dataset(tmp);
  CHECK(d1.values == d2.values);
  CHECK(d1.values == d.values);
  CHECK(d1.labels == d2.labels);
  std::remove(tmp.c_str());
}

TEST_CASE("per-series normalization zeroes means") {
  auto d = synth::random_dataset(4, 50, 7);
  normalize_per_series(d);
  for (std::size_t i = 0; i < d.n(); ++i) {
    double mean = 0.0;
    for (double v : d.series(i)) mean += v;
    CHECK(std::abs(mean / 50.0) < 1e-12);
  }
}

namespace {

std::multiset<std::vector<double>> row_multiset(const TimeSeriesDataset& a,
                                                const TimeSeriesDataset& b) {
  std::multiset<std::vector<double>> rows;
  for (std::size_t i = 0; i < a.n(); ++i)
    rows.emplace(a.series(i).begin(), a.series(i).end());
  for (std::size_t i = 0; i < b.n(); ++i)
    rows.emplace(b.series(i).begin(), b.series(i).end());
  return rows;
}

}  // namespace

TEST_CASE("resample: identity, determinism, stratification, permutation") {
  // 4 classes with train counts {10,10,5,5}.
  std::vector<int> train_labels, test_labels;
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < (c < 2 ? 10 : 5); ++i) train_labels.push_back(c);
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 7; ++i) test_labels.push_back(c);

  std::mt19937_64 g(3);
  auto fill = [&](const std::vector<int>& labels) {
    std::vector<double> values(labels.size() * 12);
    for (double& v : values) v = synth::gauss(g);
    return synth::make("resample_toy", 12, labels, std::move(values));
  };
  auto train = fill(train_labels);
  auto test = fill(test_labels);

  SUBCASE("resample 0 is the identity") {
    auto [tr, te] = stratified_resample(train, test, {5, 0, 0, 0});
    CHECK(tr.values == train.values);
    CHECK(te.values == test.values);
  }
  SUBCASE("fixed seed is deterministic") {
    auto a = stratified_resample(train, test, {5, 3, 0, 0});
    auto b = stratified_resample(train, test, {5, 3, 0, 0});
    CHECK(a.first.values == b.first.values);
    CHECK(a.second.values == b.second.values);
  }
  SUBCASE("per-class train counts preserved") {
    auto [tr, te] = stratified_resample(train, test, {5, 1, 0, 0});
    std::map<int, int> counts;
    for (int l : tr.labels) ++counts[l];
    CHECK(counts[0] == 10);
    CHECK(counts[1] == 10);
    CHECK(counts[2] == 5);
    CHECK(counts[3] == 5);
    CHECK(tr.n() == train.n());
    CHECK(te.n() == test.n());
  }
  SUBCASE("union is a permutation of the pool") {
    for (int id : {1, 2, 7}) {
      auto [tr, te] = stratified_resample(train, test, {5, id, 0, 0});
      CHECK(row_multiset(tr, te) == row_multiset(train, test));
    }
  }
  SUBCASE("length mismatch rejected") {
    auto bad = synth::random_dataset(8, 13, 1, 4);
    bad.class_names = train.class_names;
    CHECK_THROWS_AS(stratified_resample(train, bad, {5, 1, 0, 0}), Error);
  }
}

TEST_SUITE_END();
