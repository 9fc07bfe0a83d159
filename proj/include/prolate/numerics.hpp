#pragma once

// Special functions, quadrature rules and symmetric eigensolvers shared by the
// basis, forward and reconstruction modules.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace prolate {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator-(Point2 a) { return {-a.x, -a.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

// One-dimensional rule on an interval.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

// Two-dimensional rule. When `paired` is set the second half of the nodes is
// the exact negation of the first half (node i + N/2 == -node i, same weight),
// which lets the symmetric-set solver split even and odd parts.
struct QuadratureRule {
  std::vector<Point2> nodes;
  std::vector<double> weights;
  bool paired = false;

  std::size_t size() const { return nodes.size(); }
  double measure() const;
};

struct SymmetricTridiagonal {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;  // length diagonal.size() - 1

  std::size_t dim() const { return diagonal.size(); }
};

// Dense symmetric matrix stored row-major; only the full square is used.
struct DenseSymmetric {
  std::size_t n = 0;
  std::vector<double> data;

  DenseSymmetric() = default;
  explicit DenseSymmetric(std::size_t dim) : n(dim), data(dim * dim, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

// Eigenvalues ascending; eigenvector k is column k of the row-major
// `vectors` matrix (vectors[i * n + k]). `vectors` is empty when only
// eigenvalues were requested.
struct EigenSystem {
  std::vector<double> values;
  std::vector<double> vectors;
  std::size_t n = 0;

  double vector_entry(std::size_t row, std::size_t k) const { return vectors[row * n + k]; }
};

/// Bessel function of the first kind J_order(x) for integer order >= 0, x >= 0.
double bessel_j(int order, double x);

/// J_0(x) ... J_max_order(x) in one sweep.
std::vector<double> bessel_j_all(int max_order, double x);

/// Gauss-Legendre rule with n nodes on [-1, 1], nodes ascending.
GaussRule gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
GaussRule gauss_legendre(int n, double a, double b);

/// Jacobi polynomial P_n^{(a,b)}(x) via the three-term recurrence.
double jacobi_p(int n, double a, double b, double x);

/// Orthonormal disk-polynomial radial factor of degree m + 2j:
///   Z_j(r) = sqrt(2 (m + 2j + 1)) r^m P_j^{(0,m)}(2 r^2 - 1),
/// normalised so that int_0^1 Z_j Z_k r dr = delta_jk. With this convention
/// Z_j(r) Y_m(theta) is an eigenfunction of the c = 0 Sturm-Liouville
/// operator with eigenvalue (m + 2j)(m + 2j + 2).
double zernike_radial(int m, int j, double r);

/// Z_0(r) ... Z_{count-1}(r) for fixed m.
std::vector<double> zernike_radial_all(int m, int count, double r);

/// int_0^1 Z_j(r) J_m(k r) r dr = sqrt(2(n+1)) (-1)^j J_{n+1}(k) / k, n = m + 2j,
/// for j = 0 .. count-1. The k -> 0 limit is handled.
std::vector<double> zernike_hankel_all(int m, int count, double k);

/// Implicit-shift QL on a symmetric tridiagonal matrix.
EigenSystem sym_eig(const SymmetricTridiagonal& t, bool want_vectors = true);

/// Householder reduction to tridiagonal form followed by implicit QL.
EigenSystem sym_eig(const DenseSymmetric& a, bool want_vectors = true);

}  // namespace prolate
