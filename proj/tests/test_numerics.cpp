#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "prolate/errors.hpp"
#include "prolate/numerics.hpp"

using namespace prolate;

namespace {

// Plain power series with a fixed number of terms, long double accumulation.
double series_oracle(int m, double x, int terms = 40) {
  long double sum = 0.0L;
  long double term = 1.0L;
  for (int i = 1; i <= m; ++i) term *= static_cast<long double>(x) / (2.0L * i);
  for (int k = 0; k < terms; ++k) {
    sum += term;
    term *= -static_cast<long double>(x) * x / (4.0L * (k + 1) * (m + k + 1));
  }
  return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("bessel_j special values") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(3, 0.0) == 0.0);
  CHECK(std::abs(bessel_j(0, 2.404825557695773)) < 1e-10);
  CHECK(std::abs(series_oracle(0, 2.404825557695773)) < 1e-10);
}

TEST_CASE("bessel_j against the standard library") {
  double worst = 0.0;
  for (int m = 0; m <= 100; m += 3) {
    for (double x = 0.0; x <= 200.0; x += 0.731) {
      const double ref = std::cyl_bessel_j(static_cast<double>(m), x);
      worst = std::max(worst, std::abs(bessel_j(m, x) - ref));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("bessel_j agrees with a direct series for small arguments") {
  for (int m = 0; m <= 10; ++m) {
    for (double x = 0.1; x < 8.0; x += 0.37) {
      CHECK(bessel_j(m, x) == doctest::Approx(series_oracle(m, x, 60)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("bessel_j three-term recurrence") {
  for (int m = 1; m <= 20; ++m) {
    for (double x = 0.5; x <= 50.0; x += 0.5) {
      const double lhs = bessel_j(m - 1, x) + bessel_j(m + 1, x);
      const double rhs = 2.0 * m / x * bessel_j(m, x);
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }
}

TEST_CASE("bessel_j_all matches single evaluations") {
  const auto all = bessel_j_all(60, 37.5);
  for (int m = 0; m <= 60; ++m) CHECK(std::abs(all[m] - bessel_j(m, 37.5)) < 1e-13);
}

TEST_CASE("gauss_legendre small rules") {
  const auto g1 = gauss_legendre(1);
  CHECK(g1.nodes[0] == doctest::Approx(0.0));
  CHECK(g1.weights[0] == doctest::Approx(2.0));
  const auto g2 = gauss_legendre(2);
  CHECK(g2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(g2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(g2.weights[0] == doctest::Approx(1.0));
  const auto g3 = gauss_legendre(3);
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i) s += g3.weights[i] * std::pow(g3.nodes[i], 4);
  CHECK(std::abs(s - 0.4) < 1e-14);
}

TEST_CASE("gauss_legendre monomial exactness") {
  for (int n : {1, 2, 5, 16, 40, 101}) {
    const auto g = gauss_legendre(n);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      long double s = 0.0L;
      for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::pow((long double)g.nodes[i], d);
      const double exact = (d % 2 == 1) ? 0.0 : 2.0 / (d + 1);
      CHECK(std::abs(static_cast<double>(s) - exact) <= 1e-13 * std::max(1.0, exact) + 1e-15);
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), ParameterError);
}

TEST_CASE("zernike radial orthonormality") {
  const auto g = gauss_legendre(200, 0.0, 1.0);
  for (int m : {0, 1, 4, 9}) {
    const int count = 12;
    std::vector<std::vector<double>> z;
    for (std::size_t i = 0; i < g.size(); ++i) z.push_back(zernike_radial_all(m, count, g.nodes[i]));
    for (int j = 0; j < count; ++j) {
      for (int k = 0; k < count; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * g.nodes[i] * z[i][j] * z[i][k];
        CHECK(std::abs(s - (j == k ? 1.0 : 0.0)) < 1e-12);
      }
    }
  }
  CHECK(zernike_radial(0, 0, 0.1) == doctest::Approx(zernike_radial(0, 0, 0.9)));
  CHECK(zernike_radial(2, 3, 0.4) == doctest::Approx(zernike_radial_all(2, 4, 0.4)[3]));
}

TEST_CASE("zernike radial factor is an eigenfunction of the radial operator at c = 0") {
  // -(1/r)(r (1-r^2) Z')' + m^2/r^2 Z = n(n+2) Z checked by central differences.
  const double h = 1e-4;
  for (int m : {0, 2, 3}) {
    for (int j : {0, 1, 3}) {
      const int n = m + 2 * j;
      for (double r : {0.3, 0.55, 0.8}) {
        auto flux = [&](double s) {
          const double dz = (zernike_radial(m, j, s + h / 2) - zernike_radial(m, j, s - h / 2)) / h;
          return s * (1 - s * s) * dz;
        };
        const double lhs = -(flux(r + h / 2) - flux(r - h / 2)) / (h * r) +
                           m * m / (r * r) * zernike_radial(m, j, r);
        CHECK(lhs == doctest::Approx(n * (n + 2) * zernike_radial(m, j, r)).epsilon(1e-5).scale(1.0));
      }
    }
  }
}

TEST_CASE("zernike-hankel closed form against quadrature") {
  const auto g = gauss_legendre(300, 0.0, 1.0);
  for (int m : {0, 1, 5}) {
    for (double k : {0.0, 1e-8, 0.7, 6.3, 25.0}) {
      const auto closed = zernike_hankel_all(m, 8, k);
      for (int j = 0; j < 8; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          s += g.weights[i] * g.nodes[i] * zernike_radial(m, j, g.nodes[i]) * bessel_j(m, k * g.nodes[i]);
        }
        CHECK(std::abs(s - closed[j]) < 1e-12);
      }
    }
  }
}

TEST_CASE("sym_eig trivial matrices") {
  SymmetricTridiagonal id{{1, 1, 1, 1, 1}, {0, 0, 0, 0}};
  for (double v : sym_eig(id).values) CHECK(v == doctest::Approx(1.0));
  SymmetricTridiagonal d3{{3, 1, 2}, {0, 0}};
  const auto e3 = sym_eig(d3);
  CHECK(e3.values[0] == doctest::Approx(1.0));
  CHECK(e3.values[2] == doctest::Approx(3.0));
  CHECK(std::abs(e3.vector_entry(1, 0)) == doctest::Approx(1.0));
  DenseSymmetric a(2);
  a(0, 1) = a(1, 0) = 1.0;
  const auto e2 = sym_eig(a);
  CHECK(e2.values[0] == doctest::Approx(-1.0));
  CHECK(e2.values[1] == doctest::Approx(1.0));
  DenseSymmetric bad(2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(sym_eig(bad), ParameterError);
}

namespace {

double reconstruction_error(const DenseSymmetric& a, const EigenSystem& es) {
  const std::size_t n = a.n;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += es.vector_entry(i, k) * es.values[k] * es.vector_entry(j, k);
      num += (s - a(i, j)) * (s - a(i, j));
      den += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(num / den);
}

double orthonormality_error(const EigenSystem& es) {
  const std::size_t n = es.n;
  double worst = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += es.vector_entry(i, p) * es.vector_entry(i, q);
      worst = std::max(worst, std::abs(s - (p == q ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("sym_eig dense reconstruction on random matrices") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (std::size_t n : {1u, 3u, 17u, 64u, 200u}) {
    DenseSymmetric a(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = nd(rng);
    const auto es = sym_eig(a);
    CHECK(reconstruction_error(a, es) < 1e-9);
    CHECK(orthonormality_error(es) < 1e-10);
    for (std::size_t k = 1; k < n; ++k) CHECK(es.values[k - 1] <= es.values[k]);
    const auto vals = sym_eig(a, false);
    CHECK(vals.vectors.empty());
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(vals.values[k] - es.values[k]) < 1e-10);
  }
}

TEST_CASE("sym_eig tridiagonal residuals") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ud(-5.0, 5.0);
  const std::size_t n = 150;
  SymmetricTridiagonal t;
  for (std::size_t i = 0; i < n; ++i) t.diagonal.push_back(ud(rng));
  for (std::size_t i = 0; i + 1 < n; ++i) t.off_diagonal.push_back(ud(rng));
  const auto es = sym_eig(t);
  double anorm = 0.0;
  for (double d : t.diagonal) anorm = std::max(anorm, std::abs(d));
  for (double e : t.off_diagonal) anorm = std::max(anorm, 2 * std::abs(e));
  for (std::size_t k = 0; k < n; ++k) {
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double av = t.diagonal[i] * es.vector_entry(i, k);
      if (i > 0) av += t.off_diagonal[i - 1] * es.vector_entry(i - 1, k);
      if (i + 1 < n) av += t.off_diagonal[i] * es.vector_entry(i + 1, k);
      res += std::pow(av - es.values[k] * es.vector_entry(i, k), 2);
    }
    CHECK(std::sqrt(res) <= 1e-10 * anorm * 5);
  }
  CHECK(orthonormality_error(es) < 1e-10);
}
