#include <doctest.h>

#include "test_util.hpp"
#include "wkm/distance.hpp"
#include "wkm/pca.hpp"

using wkm::Vec;

TEST_CASE("mean of simple sets") {
  CHECK(wkm::mean(std::vector<Vec>{{0.0, 0.0}, {2.0, 0.0}}) == Vec{1.0, 0.0});
  CHECK(wkm::mean(std::vector<Vec>{{1.0, 2.0}}) == Vec{1.0, 2.0});
  CHECK(wkm::mean(std::vector<Vec>{{0.0, 0.0}, {1.0, 0.0}, {2.0, 3.0}}) == Vec{1.0, 1.0});
  CHECK_THROWS_AS((void)wkm::mean(std::vector<Vec>{}), wkm::Error);
}

TEST_CASE("scatter matrix of simple sets") {
  {
    const std::vector<Vec> pts{{1.0, 0.0}, {-1.0, 0.0}, {0.0, 0.0}};
    const wkm::Matrix m = wkm::scatter_matrix(pts, Vec{0.0, 0.0});
    CHECK(m(0, 0) == 2.0);
    CHECK(m(0, 1) == 0.0);
    CHECK(m(1, 0) == 0.0);
    CHECK(m(1, 1) == 0.0);
  }
  {
    const std::vector<Vec> pts{{1.0, 1.0}, {-1.0, -1.0}};
    const wkm::Matrix m = wkm::scatter_matrix(pts, Vec{0.0, 0.0});
    CHECK(m(0, 0) == 2.0);
    CHECK(m(0, 1) == 2.0);
    CHECK(m(1, 0) == 2.0);
    CHECK(m(1, 1) == 2.0);
  }
  {
    const Vec p{3.0, -2.0};
    const wkm::Matrix m = wkm::scatter_matrix(std::vector<Vec>{p}, p);
    for (double v : m.a) CHECK(v == 0.0);
  }
}

TEST_CASE("symmetric_eigen on small matrices") {
  {
    wkm::Matrix m(2);
    m(0, 0) = 2.0;
    const wkm::EigenDecomposition eig = wkm::symmetric_eigen(m);
    CHECK(eig.values == std::vector<double>{2.0, 0.0});
    CHECK(eig.vectors[0] == Vec{1.0, 0.0});
    CHECK(eig.vectors[1] == Vec{0.0, 1.0});
  }
  {
    wkm::Matrix m(2);
    m(0, 0) = 2.0;
    m(0, 1) = 2.0;
    m(1, 0) = 2.0;
    m(1, 1) = 2.0;
    const wkm::EigenDecomposition eig = wkm::symmetric_eigen(m);
    CHECK(eig.values[0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(eig.values[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(eig.vectors[0][0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(eig.vectors[0][1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  }
  {
    wkm::Matrix m(3);
    for (size_t i = 0; i < 3; ++i) m(i, i) = 1.0;
    const wkm::EigenDecomposition eig = wkm::symmetric_eigen(m);
    CHECK(eig.values == std::vector<double>{1.0, 1.0, 1.0});
    for (size_t i = 0; i < 3; ++i) {
      for (size_t j = 0; j < 3; ++j) {
        CHECK(eig.vectors[i][j] == (i == j ? 1.0 : 0.0));
      }
    }
  }
}

TEST_CASE("symmetric_eigen rejects asymmetric input") {
  wkm::Matrix m(2);
  m(0, 1) = 1.0;
  m(1, 0) = 2.0;
  CHECK_THROWS_AS((void)wkm::symmetric_eigen(m), wkm::Error);
}

TEST_CASE("eigendecomposition reconstructs and stays orthonormal") {
  std::mt19937_64 eng(5150);
  for (int trial = 0; trial < 40; ++trial) {
    const size_t dim = 2 + eng() % 7;
    const auto pts = testutil::random_points(eng, 3 + eng() % 30, dim);
    const wkm::Matrix m = wkm::scatter_matrix(pts, wkm::mean(pts));
    const wkm::EigenDecomposition eig = wkm::symmetric_eigen(m);

    for (size_t i = 0; i + 1 < dim; ++i) CHECK(eig.values[i] >= eig.values[i + 1]);

    // orthonormality within 1e-10
    for (size_t i = 0; i < dim; ++i) {
      for (size_t j = i; j < dim; ++j) {
        double dot = 0.0;
        for (size_t c = 0; c < dim; ++c) dot += eig.vectors[i][c] * eig.vectors[j][c];
        CHECK(std::fabs(dot - (i == j ? 1.0 : 0.0)) <= 1e-10);
      }
    }

    // reconstruction ||A - V diag(l) V^T||_F <= 1e-8 * max(1, ||A||_F)
    double err = 0.0;
    for (size_t r = 0; r < dim; ++r) {
      for (size_t c = 0; c < dim; ++c) {
        double sum = 0.0;
        for (size_t t = 0; t < dim; ++t) sum += eig.vectors[t][r] * eig.values[t] * eig.vectors[t][c];
        const double d = m(r, c) - sum;
        err += d * d;
      }
    }
    CHECK(std::sqrt(err) <= 1e-8 * std::max(1.0, m.frobenius()));
  }
}

TEST_CASE("fit_flat on hand cases") {
  {
    const std::vector<Vec> pts{{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}};
    const wkm::Flat f = wkm::fit_flat(pts, 1);
    CHECK(f.center() == Vec{1.0, 1.0});
    CHECK(f.basis()[0][0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(f.basis()[0][1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  }
  {
    const std::vector<Vec> pts{{4.0, -1.0}, {6.0, 3.0}};
    const wkm::Flat f = wkm::fit_flat(pts, 0);
    CHECK(f.center() == Vec{5.0, 1.0});
    CHECK(f.flat_dim() == 0);
  }
  {
    const std::vector<Vec> pts{{2.0, 7.0}};
    const wkm::Flat f = wkm::fit_flat(pts, 1);
    CHECK(f.center() == Vec{2.0, 7.0});
    CHECK(f.basis()[0] == Vec{1.0, 0.0});  // zero scatter resolves to the first axis
  }
  CHECK_THROWS_AS((void)wkm::fit_flat(std::vector<Vec>{}, 1), wkm::Error);
  CHECK_THROWS_AS((void)wkm::fit_flat(std::vector<Vec>{{1.0, 2.0}}, 2), wkm::Error);
}

TEST_CASE("fitted energy equals the weighted eigenvalue tail sums") {
  std::mt19937_64 eng(777);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t dim = 2 + eng() % 5;  // up to 6
    const size_t m = 1 + eng() % 50;
    const size_t n = eng() % dim;
    const auto pts = testutil::random_points(eng, m, dim);
    const wkm::WeightVector w = testutil::random_weights(eng, n + 1);

    const wkm::Flat f = wkm::fit_flat(pts, n);
    const double fitted = wkm::energy(pts, f, w);

    const wkm::EigenDecomposition eig = wkm::symmetric_eigen(wkm::scatter_matrix(pts, wkm::mean(pts)));
    double expected = 0.0;
    for (size_t j = 0; j <= n; ++j) {
      double tail = 0.0;
      for (size_t i = j; i < dim; ++i) tail += eig.values[i];
      expected += w[j] * tail;
    }
    CHECK(fitted == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("fit_flat beats random competitor flats") {
  std::mt19937_64 eng(31337);
  for (int trial = 0; trial < 10; ++trial) {
    const size_t dim = 2 + eng() % 3;  // up to 4
    const size_t m = 2 + eng() % 19;
    const size_t n = std::min<size_t>(eng() % 3, dim - 1);
    const auto pts = testutil::random_points(eng, m, dim);
    const wkm::WeightVector w = testutil::random_weights(eng, n + 1);
    const double fitted = wkm::energy(pts, wkm::fit_flat(pts, n), w);
    for (int c = 0; c < 1000; ++c) {
      const wkm::Flat competitor = testutil::random_flat(eng, dim, n);
      CHECK(fitted <= wkm::energy(pts, competitor, w) + 1e-9);
    }
  }
}

TEST_CASE("fit_flat is bit-deterministic") {
  std::mt19937_64 eng(4242);
  const auto pts = testutil::random_points(eng, 25, 5);
  const wkm::Flat a = wkm::fit_flat(pts, 3);
  const wkm::Flat b = wkm::fit_flat(pts, 3);
  CHECK(a == b);
}
