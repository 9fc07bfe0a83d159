#include "prolate/numerics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "prolate/errors.hpp"

namespace prolate {

double QuadratureRule::measure() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

// ---------------------------------------------------------------------------
// Bessel functions

namespace {

// Power series; used only where the terms decrease monotonically
// (x^2/4 <= order + 1), so no cancellation occurs.
double bessel_series(int order, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= order; ++i) term *= half / i;
  if (term == 0.0) return 0.0;
  double sum = term;
  const double q = -half * half;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (order + k));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

bool series_is_safe(int order, double x) { return 0.25 * x * x <= order + 1.0; }

}  // namespace

std::vector<double> bessel_j_all(int max_order, double x) {
  if (max_order < 0 || !(x >= 0.0)) {
    throw ParameterError("bessel_j_all: requires max_order >= 0 and x >= 0");
  }
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (series_is_safe(0, x)) {
    for (int k = 0; k <= max_order; ++k) out[k] = bessel_series(k, x);
    return out;
  }

  // Miller's backward recurrence normalised by J_0 + 2 sum J_2k = 1.
  const double top = std::max<double>(max_order, x);
  int start = static_cast<int>(top + 30.0 + std::sqrt(40.0 * top));
  if (start % 2 != 0) ++start;

  constexpr double kBig = 1e250;
  double j_next = 0.0;  // J_{k+1}
  double j_curr = 1e-300;  // J_k
  double sum = 0.0;
  for (int k = start; k >= 1; --k) {
    if (k <= max_order) out[k] = j_curr;
    if (k % 2 == 0) sum += 2.0 * j_curr;
    const double j_prev = (2.0 * k / x) * j_curr - j_next;
    j_next = j_curr;
    j_curr = j_prev;
    if (std::abs(j_curr) > kBig) {
      j_curr /= kBig;
      j_next /= kBig;
      sum /= kBig;
      for (int i = k; i <= max_order; ++i) out[i] /= kBig;
    }
  }
  out[0] = j_curr;
  sum += j_curr;
  for (double& v : out) v /= sum;
  return out;
}

double bessel_j(int order, double x) {
  if (order < 0 || !(x >= 0.0)) {
    throw ParameterError("bessel_j: requires order >= 0 and x >= 0");
  }
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  if (series_is_safe(order, x)) return bessel_series(order, x);
  return bessel_j_all(order, x)[order];
}

// ---------------------------------------------------------------------------
// Quadrature

GaussRule gauss_legendre(int n) {
  if (n < 1) throw ParameterError("gauss_legendre: n must be positive");
  GaussRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p1 = 1.0;
    double p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    dp = n * (z * p1 - p2) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

GaussRule gauss_legendre(int n, double a, double b) {
  GaussRule rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

// ---------------------------------------------------------------------------
// Orthogonal polynomials

double jacobi_p(int n, double a, double b, double x) {
  if (n < 0) throw ParameterError("jacobi_p: negative degree");
  if (n == 0) return 1.0;
  double p_prev = 1.0;
  double p = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
  for (int k = 2; k <= n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (a * a - b * b);
    const double c3 = (s - 2.0) * (s - 1.0) * s;
    const double c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double p_next = ((c2 + c3 * x) * p - c4 * p_prev) / c1;
    p_prev = p;
    p = p_next;
  }
  return p;
}

std::vector<double> zernike_radial_all(int m, int count, double r) {
  if (m < 0 || count < 0) throw ParameterError("zernike_radial_all: negative index");
  std::vector<double> out(static_cast<std::size_t>(count), 0.0);
  if (count == 0) return out;
  const double t = 2.0 * r * r - 1.0;
  const double rm = (m == 0) ? 1.0 : std::pow(r, m);
  const double b = m;
  double p_prev = 1.0;
  double p = 0.0;
  for (int j = 0; j < count; ++j) {
    double pj;
    if (j == 0) {
      pj = 1.0;
    } else if (j == 1) {
      pj = 1.0 + 0.5 * (b + 2.0) * (t - 1.0);
    } else {
      const double s = 2.0 * j + b;
      const double c1 = 2.0 * j * (j + b) * (s - 2.0);
      const double c2 = (s - 1.0) * (-b * b);
      const double c3 = (s - 2.0) * (s - 1.0) * s;
      const double c4 = 2.0 * (j - 1.0) * (j + b - 1.0) * s;
      pj = ((c2 + c3 * t) * p - c4 * p_prev) / c1;
    }
    if (j >= 1) p_prev = p;
    p = pj;
    out[j] = std::sqrt(2.0 * (m + 2 * j + 1)) * rm * pj;
  }
  return out;
}

double zernike_radial(int m, int j, double r) {
  if (j < 0) throw ParameterError("zernike_radial: negative index");
  return zernike_radial_all(m, j + 1, r)[j];
}

std::vector<double> zernike_hankel_all(int m, int count, double k) {
  std::vector<double> out(static_cast<std::size_t>(count), 0.0);
  if (count == 0) return out;
  if (k == 0.0) {
    if (m == 0) out[0] = std::sqrt(2.0) * 0.5;
    return out;
  }
  const std::vector<double> jv = bessel_j_all(m + 2 * count - 1, k);
  for (int j = 0; j < count; ++j) {
    const int n = m + 2 * j;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    out[j] = std::sqrt(2.0 * (n + 1)) * sign * jv[n + 1] / k;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Symmetric eigensolvers

namespace {

// Implicit QL on (d, e) where e[i] couples i and i+1 and e[n-1] = 0.
// Rows of `zt` (length n each) are rotated alongside, so on exit row k of
// zt holds eigenvector k expressed in the input basis.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, std::vector<double>* zt) {
  const int n = static_cast<int>(d.size());
  const double eps = std::numeric_limits<double>::epsilon();
  double anorm = 0.0;
  for (int i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]) + (i > 0 ? std::abs(e[i - 1]) : 0.0));
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
        // Clusters of eigenvalues far below the matrix norm cannot be split
        // to relative precision; accept absolute precision after a while.
        if (iter >= 30 && std::abs(e[m]) <= eps * anorm) break;
      }
      if (m != l) {
        if (iter++ == 60) {
          throw ComputationError("sym_eig: QL iteration did not converge for eigenvalue " +
                                 std::to_string(l));
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (zt != nullptr) {
            double* row_i = zt->data() + static_cast<std::size_t>(i) * n;
            double* row_i1 = row_i + n;
            for (int k = 0; k < n; ++k) {
              f = row_i1[k];
              row_i1[k] = s * row_i[k] + c * f;
              row_i[k] = c * row_i[k] - s * f;
            }
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

EigenSystem sorted_system(std::vector<double>& d, const std::vector<double>* zt) {
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  EigenSystem out;
  out.n = n;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = d[order[k]];
  if (zt != nullptr) {
    out.vectors.assign(n * n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double* row = zt->data() + order[k] * n;
      for (std::size_t i = 0; i < n; ++i) out.vectors[i * n + k] = row[i];
    }
  }
  return out;
}

}  // namespace

EigenSystem sym_eig(const SymmetricTridiagonal& t, bool want_vectors) {
  const std::size_t n = t.dim();
  if (n == 0) return {};
  if (t.off_diagonal.size() + 1 != n) {
    throw ParameterError("sym_eig: off-diagonal length must be dim - 1");
  }
  std::vector<double> d = t.diagonal;
  std::vector<double> e(n, 0.0);
  std::copy(t.off_diagonal.begin(), t.off_diagonal.end(), e.begin());
  std::vector<double> zt;
  if (want_vectors) {
    zt.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) zt[i * n + i] = 1.0;
  }
  ql_implicit(d, e, want_vectors ? &zt : nullptr);
  return sorted_system(d, want_vectors ? &zt : nullptr);
}

EigenSystem sym_eig(const DenseSymmetric& input, bool want_vectors) {
  const std::size_t n = input.n;
  if (n == 0) return {};
  if (input.data.size() != n * n) throw ParameterError("sym_eig: matrix storage mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double a = input(i, j);
      const double b = input(j, i);
      if (std::abs(a - b) > 1e-12 * (std::abs(a) + std::abs(b)) + 1e-300) {
        throw ParameterError("sym_eig: matrix is not symmetric");
      }
    }
  }

  // Householder tridiagonalisation (tred2). The full square of the active
  // block is kept symmetric so every inner loop runs along rows.
  std::vector<double> a = input.data;
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  std::vector<double> d(n, 0.0);
  std::vector<double> e(n, 0.0);
  std::vector<double> work(n, 0.0);

  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (std::size_t k = 0; k <= l; ++k) scale += std::abs(at(i, k));
      if (scale == 0.0) {
        e[i] = at(i, l);
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          at(i, k) /= scale;
          h += at(i, k) * at(i, k);
        }
        double f = at(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        at(i, l) = f - g;
        f = 0.0;
        const double* u = &at(i, 0);
        for (std::size_t j = 0; j <= l; ++j) {
          if (want_vectors) at(j, i) = u[j] / h;
          const double* row_j = &at(j, 0);
          g = 0.0;
          for (std::size_t k = 0; k <= l; ++k) g += row_j[k] * u[k];
          e[j] = g / h;
          f += e[j] * u[j];
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) e[j] -= hh * u[j];
        for (std::size_t j = 0; j <= l; ++j) {
          const double fj = u[j];
          const double gj = e[j];
          double* row_j = &at(j, 0);
          for (std::size_t k = 0; k <= l; ++k) row_j[k] -= fj * e[k] + gj * u[k];
        }
      }
    } else {
      e[i] = at(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    if (want_vectors) {
      if (d[i] != 0.0) {
        std::fill(work.begin(), work.begin() + i, 0.0);
        for (std::size_t k = 0; k < i; ++k) {
          const double uk = at(i, k);
          const double* row_k = &at(k, 0);
          for (std::size_t j = 0; j < i; ++j) work[j] += uk * row_k[j];
        }
        for (std::size_t k = 0; k < i; ++k) {
          const double v = at(k, i);
          double* row_k = &at(k, 0);
          for (std::size_t j = 0; j < i; ++j) row_k[j] -= work[j] * v;
        }
      }
      d[i] = at(i, i);
      at(i, i) = 1.0;
      for (std::size_t j = 0; j < i; ++j) {
        at(j, i) = 0.0;
        at(i, j) = 0.0;
      }
    } else {
      d[i] = at(i, i);
    }
  }

  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  if (!want_vectors) {
    ql_implicit(d, e, nullptr);
    return sorted_system(d, nullptr);
  }
  // QL rotates rows of Q^T.
  std::vector<double> zt(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) zt[j * n + i] = a[i * n + j];
  }
  ql_implicit(d, e, &zt);
  return sorted_system(d, &zt);
}

}  // namespace prolate
