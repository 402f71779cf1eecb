#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hklab/dense.hpp"

using namespace hklab;

TEST_CASE("largest singular value of the 2x2 shear") {
  DenseMatrix m(2, 2);
  m.at(0, 0) = 1.0;
  m.at(0, 1) = 1.0;
  m.at(1, 1) = 1.0;
  // golden ratio
  CHECK(dense::largest_singular_value(m) ==
        doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  const RealVec sv = dense::singular_values(m);
  CHECK(sv.size() == 2);
  CHECK(sv[0] * sv[1] == doctest::Approx(1.0).epsilon(1e-12)); // |det| = 1
}

TEST_CASE("eigenvalues of a rotation block") {
  DenseMatrix m(2, 2);
  m.at(0, 1) = 1.0;
  m.at(1, 0) = -1.0;
  auto eig = dense::eigenvalues(m);
  std::sort(eig.begin(), eig.end(),
            [](const Complex& a, const Complex& b) { return a.imag() < b.imag(); });
  CHECK(std::abs(eig[0] - Complex(0.0, -1.0)) < 1e-12);
  CHECK(std::abs(eig[1] - Complex(0.0, 1.0)) < 1e-12);
  CHECK_THROWS_AS(static_cast<void>(dense::eigenvalues(DenseMatrix(2, 3))), DimensionMismatch);
}

TEST_CASE("least squares residual of an inconsistent system") {
  DenseMatrix a(2, 1);
  a.at(0, 0) = 1.0;
  a.at(1, 0) = 1.0;
  const std::vector<Complex> b{Complex(0.0, 0.0), Complex(2.0, 0.0)};
  CHECK(dense::least_squares_residual(a, b) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("dense solve round trip") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n = 16;
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a.at(i, j) = Complex(gauss(rng), gauss(rng));
  std::vector<Complex> b(n);
  for (auto& z : b) z = Complex(gauss(rng), gauss(rng));
  const auto x = dense::solve(a, b);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Complex acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) acc += a.at(i, j) * x[j];
    err += std::norm(acc - b[i]);
  }
  CHECK(std::sqrt(err) < 1e-10);
}
