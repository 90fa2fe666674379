#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "orthoreg/errors.hpp"
#include "orthoreg/linalg.hpp"

using namespace orthoreg;

TEST_CASE("gram of identity and a rank-one matrix") {
  CHECK(gram(Matrix::identity(2)) == Matrix::identity(2));
  CHECK(gram(Matrix{{1, 1}, {0, 0}}) == Matrix{{1, 1}, {1, 1}});
}

TEST_CASE("gram matches column dot products and is exactly symmetric") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix w = oracle::random_matrix(5, 3, seed);
    const Matrix g = gram(w);
    REQUIRE(g.rows() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(g(i, i) == doctest::Approx(oracle::column_dot(w, i, i)).epsilon(1e-12));
      for (std::size_t j = 0; j < 3; ++j) {
        CHECK(g(i, j) == g(j, i));
        CHECK(std::abs(g(i, j) - oracle::column_dot(w, i, j)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("gram_rows is the gram of the transpose") {
  const Matrix w = oracle::random_matrix(4, 7, 3);
  CHECK(oracle::max_abs_diff(gram_rows(w), gram(w.transpose())) <= 1e-12);
}

TEST_CASE("reshape_conv shapes and element preservation") {
  CHECK(reshape_conv(ConvTensor(3, 3, 16, 32)).rows() == 144);
  CHECK(reshape_conv(ConvTensor(3, 3, 16, 32)).cols() == 32);

  const Matrix single = reshape_conv(ConvTensor(1, 1, 1, 1, {7.0}));
  CHECK(single == Matrix{{7.0}});

  Rng rng(11);
  std::vector<double> data(2 * 2 * 3 * 5);
  for (double& x : data) x = rng.normal();
  const ConvTensor t(2, 2, 3, 5, data);
  const Matrix w = reshape_conv(t);
  CHECK(w.rows() == 12);
  CHECK(w.cols() == 5);
  std::vector<double> a(data), b(w.data().begin(), w.data().end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
  double norm_t = 0.0;
  for (double x : data) norm_t += x * x;
  CHECK(frob_norm_sq(w) == norm_t);
  // Column j is filter j: entry (s, h, c, j) sits at row (s*H + h)*C + c.
  CHECK(w((1 * 2 + 0) * 3 + 2, 4) == t(1, 0, 2, 4));
  CHECK(unreshape_conv(w, 2, 2, 3).data().size() == data.size());
  CHECK(std::equal(data.begin(), data.end(), unreshape_conv(w, 2, 2, 3).data().begin()));
}

TEST_CASE("frob_norm_sq") {
  CHECK(frob_norm_sq(Matrix(3, 3)) == 0.0);
  CHECK(frob_norm_sq(Matrix{{0, 1}, {1, 0}}) == 2.0);
  CHECK(frob_norm_sq(Matrix::identity(5)) == 5.0);
}

TEST_CASE("sym_eig_dominant on small closed-form cases") {
  const EigPair d = sym_eig_dominant(Matrix{{3, 0}, {0, 0}});
  CHECK(d.value == 3.0);
  CHECK(d.vector == Matrix::column({1.0, 0.0}));

  const EigPair s = sym_eig_dominant(Matrix{{0, 1}, {1, 0}});
  CHECK(std::abs(s.value) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sym_eig recovers a known spectrum") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng(seed + 100);
    std::vector<double> values(6);
    for (double& v : values) v = rng.uniform(-3.0, 3.0);
    const Matrix a = oracle::symmetric_with_spectrum(values, seed);
    const SymEigen eig = sym_eig(a);
    std::vector<double> expected = values;
    std::sort(expected.rbegin(), expected.rend());
    for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(eig.values[k] - expected[k]) <= 1e-10);

    double max_abs = 0.0;
    for (double v : values) max_abs = std::max(max_abs, std::abs(v));
    const EigPair dom = sym_eig_dominant(a);
    CHECK(std::abs(std::abs(dom.value) - max_abs) <= 1e-10);
    CHECK(norm2(dom.vector.data()) == doctest::Approx(1.0).epsilon(1e-12));
    const Matrix residual = matmul(a, dom.vector) - dom.value * dom.vector;
    CHECK(norm2(residual.data()) <= 1e-9 * std::max(1.0, std::abs(dom.value)));
  }
}

TEST_CASE("sym_eig errors") {
  CHECK_THROWS_AS(sym_eig(Matrix{{0, 1}, {0.5, 0}}), NotSymmetric);
  CHECK_THROWS_AS(sym_eig(Matrix(2, 3)), NotSymmetric);
  const Matrix a = oracle::symmetric_with_spectrum({1, 2, 3, 4, 5}, 9);
  JacobiOptions capped;
  capped.max_sweeps = 1;
  CHECK_THROWS_AS(sym_eig(a, capped), NoConvergence);
}

TEST_CASE("power iteration closed forms") {
  for (std::uint64_t seed : {0u, 1u, 17u, 12345u}) {
    CHECK(power_iter_sigma(Matrix{{3, 0}, {0, 0}}, 1, seed) == doctest::Approx(3.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(power_iter_sigma(Matrix(2, 2), 2, 0), ZeroIterate);
  CHECK_THROWS_AS(power_iter_sigma(Matrix::identity(2), 0, 0), std::invalid_argument);
}

TEST_CASE("power iteration is a lower bound and non-decreasing in iters") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Matrix a = [&] {
      Matrix m = oracle::random_matrix(8, 8, seed);
      return m + m.transpose();
    }();
    const double exact = std::abs(sym_eig_dominant(a).value);
    double prev = 0.0;
    for (int iters = 1; iters <= 12; ++iters) {
      const double est = power_iter_sigma(a, iters, seed * 7 + 1);
      CHECK(est <= exact + 1e-12);
      CHECK(est >= prev - 1e-12 * exact);
      prev = est;
    }
  }
}

TEST_CASE("power iteration accuracy with a dominant gap") {
  int within_10pct = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed + 5000);
    std::vector<double> values(8);
    values[0] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    for (std::size_t k = 1; k < 8; ++k) values[k] = rng.uniform(-0.5, 0.5);
    const Matrix a = oracle::symmetric_with_spectrum(values, seed);
    const double exact = std::abs(sym_eig_dominant(a).value);
    const double e10 = power_iter_sigma(a, 10, seed);
    CHECK(std::abs(e10 - exact) <= 1e-3 * exact);
    within_10pct += std::abs(power_iter_sigma(a, 2, seed) - exact) <= 0.1 * exact;
  }
  // Two rounds leave the start vector's overlap with the dominant direction
  // visible; most but not all random starts are within 10%.
  CHECK(within_10pct >= 75);
}

TEST_CASE("matrix-free gram shift agrees with the explicit operator") {
  const Matrix w = oracle::random_weight(9, 5, 4);
  Matrix a = gram(w);
  for (std::size_t i = 0; i < 5; ++i) a(i, i) -= 1.0;
  CHECK(power_iterate_gram_shift(w, 3, 8).sigma ==
        doctest::Approx(power_iterate(a, 3, 8).sigma).epsilon(1e-12));
}

TEST_CASE("warm start reuses the supplied direction") {
  const Matrix a{{2, 0}, {0, 1}};
  const auto r = power_iterate(a, 1, 0, Matrix::column({1.0, 0.0}));
  CHECK(r.sigma == 2.0);
  CHECK(r.direction == Matrix::column({1.0, 0.0}));
}

TEST_CASE("singular values") {
  const auto id = singular_values(Matrix::identity(3));
  for (double s : id) CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  const auto d = singular_values(Matrix{{2, 0}, {0, 1}});
  CHECK(d[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(d[1] == doctest::Approx(1.0).epsilon(1e-14));
  const auto r = singular_values(Matrix{{1, 1}, {0, 0}});
  CHECK(r[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(r[1] <= 1e-7);
}
