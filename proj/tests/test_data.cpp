#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "orthoreg/data.hpp"
#include "orthoreg/errors.hpp"

using namespace orthoreg;

namespace {

// Nearest-centroid classification using the empirical class means.
double centroid_accuracy(const Dataset& ds) {
  Matrix means(static_cast<std::size_t>(ds.num_classes), ds.dims());
  std::vector<double> counts(static_cast<std::size_t>(ds.num_classes), 0.0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto c = static_cast<std::size_t>(ds.labels[i]);
    counts[c] += 1.0;
    for (std::size_t d = 0; d < ds.dims(); ++d) means(c, d) += ds.features(i, d);
  }
  for (std::size_t c = 0; c < counts.size(); ++c)
    for (std::size_t d = 0; d < ds.dims(); ++d) means(c, d) /= counts[c];
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    double best = 1e300;
    int arg = -1;
    for (std::size_t c = 0; c < counts.size(); ++c) {
      double dist = 0.0;
      for (std::size_t d = 0; d < ds.dims(); ++d) {
        const double t = ds.features(i, d) - means(c, d);
        dist += t * t;
      }
      if (dist < best) {
        best = dist;
        arg = static_cast<int>(c);
      }
    }
    correct += arg == ds.labels[i];
  }
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

}  // namespace

TEST_CASE("gen_blobs counts and determinism") {
  const Dataset ds = gen_blobs(1, 100, 3, 16, 1.0);
  CHECK(ds.size() == 300);
  CHECK(ds.dims() == 16);
  CHECK(ds.num_classes == 3);
  for (int c = 0; c < 3; ++c) CHECK(std::count(ds.labels.begin(), ds.labels.end(), c) == 100);
  CHECK(ds == gen_blobs(1, 100, 3, 16, 1.0));
  CHECK_FALSE(ds == gen_blobs(2, 100, 3, 16, 1.0));
}

TEST_CASE("gen_blobs centers keep their separation") {
  const double spread = 0.1;
  const Matrix c = blob_centers(5, 4, 8, spread);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      double d = 0.0;
      for (std::size_t k = 0; k < 8; ++k) d += (c(i, k) - c(j, k)) * (c(i, k) - c(j, k));
      CHECK(std::sqrt(d) >= 4.0 * spread);
    }
  CHECK_THROWS_AS(blob_centers(1, 50, 2, 2.0), CenterPlacementFailure);
}

TEST_CASE("small spread is perfectly separable by nearest centroid") {
  CHECK(centroid_accuracy(gen_blobs(3, 50, 3, 16, 1e-3)) == 1.0);
}

TEST_CASE("csv parsing") {
  const Dataset ds = parse_dataset_csv("0,1.5,2\n1,3,4\n2,5,6\n0,7,8\n");
  CHECK(ds.features.rows() == 4);
  CHECK(ds.features.cols() == 2);
  CHECK(ds.labels == std::vector<int>{0, 1, 2, 0});
  CHECK(ds.num_classes == 3);
  CHECK(ds.features(0, 0) == 1.5);

  try {
    parse_dataset_csv("0,1,2\n1,3,4\n2,x,6\n0,7,8\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == 3);
    CHECK(e.column() == 2);
  }
  CHECK_THROWS_AS(parse_dataset_csv("0,1\n2,3\n"), LabelRange);
  CHECK_THROWS_AS(parse_dataset_csv("0,1,2\n1,3\n"), ParseError);

  CsvDatasetOptions opts;
  opts.label_column = 2;
  opts.has_header = true;
  const Dataset hdr = parse_dataset_csv("a,b,label\n1,2,1\n3,4,0\n", opts);
  CHECK(hdr.labels == std::vector<int>{1, 0});
  CHECK(hdr.features(1, 1) == 4.0);
}

TEST_CASE("csv round trip") {
  const Dataset ds = gen_blobs(4, 10, 3, 5, 0.2);
  CHECK(parse_dataset_csv(dataset_to_csv(ds)) == ds);
  CsvDatasetOptions opts;
  opts.label_column = 3;
  CHECK(parse_dataset_csv(dataset_to_csv(ds, 3), opts) == ds);

  const auto path = std::filesystem::temp_directory_path() / "orthoreg_test_ds.csv";
  save_csv(path, ds);
  CHECK(load_csv(path) == ds);
  std::filesystem::remove(path);
}

TEST_CASE("stratified split") {
  const Dataset ds = gen_blobs(1, 100, 3, 4, 0.2);
  const auto [train, val] = split(ds, 0.25, 7);
  CHECK(train.size() == 225);
  CHECK(val.size() == 75);
  for (int c = 0; c < 3; ++c) CHECK(std::count(val.labels.begin(), val.labels.end(), c) == 25);

  const SplitIndices a = split_indices(ds, 0.25, 7);
  CHECK(a.train == split_indices(ds, 0.25, 7).train);
  CHECK(a.val == split_indices(ds, 0.25, 7).val);
  CHECK(std::is_sorted(a.val.begin(), a.val.end()));
  CHECK_FALSE(a.val == split_indices(ds, 0.25, 8).val);

  std::vector<std::size_t> all(a.train);
  all.insert(all.end(), a.val.begin(), a.val.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);

  const Dataset uneven = gen_blobs(1, 7, 3, 4, 0.2);
  const auto s = split_indices(uneven, 0.3, 1);
  CHECK(s.val.size() == 6);  // round(21 * 0.3)

  CHECK_THROWS_AS(split(ds, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(split(parse_dataset_csv("0,1\n1,2\n1,3\n"), 0.5, 1), TooFewExamples);
}
