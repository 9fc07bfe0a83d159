#include "prolate/disk_basis.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "prolate/errors.hpp"

namespace prolate {

namespace {

// Components of an eigenvector far from its peak come out of QL with only
// absolute accuracy. Rebuild them from the three-term relation: below the
// peak via ratios a_j / a_{j+1}, above it via a_j / a_{j-1}. Both ratio
// sequences are the minimal solutions, so the recursion is stable.
std::vector<double> refine_tail(const SymmetricTridiagonal& t, double chi, std::vector<double> a) {
  const int n = static_cast<int>(a.size());
  int peak = 0;
  for (int j = 1; j < n; ++j) {
    if (std::abs(a[j]) > std::abs(a[peak])) peak = j;
  }
  const auto& d = t.diagonal;
  const auto& b = t.off_diagonal;

  std::vector<double> out(n, 0.0);
  out[peak] = a[peak];

  std::vector<double> ratio(n, 0.0);
  bool ok = true;
  if (peak > 0) {
    ratio[0] = -b[0] / (d[0] - chi);
    for (int j = 1; j < peak; ++j) ratio[j] = -b[j] / (d[j] - chi + b[j - 1] * ratio[j - 1]);
    for (int j = peak - 1; j >= 0; --j) out[j] = ratio[j] * out[j + 1];
  }
  if (peak < n - 1) {
    ratio[n - 1] = -b[n - 2] / (d[n - 1] - chi);
    for (int j = n - 2; j > peak; --j) ratio[j] = -b[j - 1] / (d[j] - chi + b[j] * ratio[j + 1]);
    for (int j = peak + 1; j < n; ++j) out[j] = ratio[j] * out[j - 1];
  }
  double norm2 = 0.0;
  for (double v : out) {
    if (!std::isfinite(v)) ok = false;
    norm2 += v * v;
  }
  if (!ok || norm2 == 0.0) return a;
  const double inv = 1.0 / std::sqrt(norm2);
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    out[j] *= inv;
    worst = std::max(worst, std::abs(out[j] - a[j]));
  }
  // The refined vector must agree with QL where QL is accurate.
  if (worst > 1e-8) return a;
  return out;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// gamma from the behaviour at r -> 0, where only Z_0 contributes to the
// Hankel transform: (K R)(r) ~ sqrt(c) a_0 sqrt(2(m+1)) (c r / 2)^m / (2 (m+1)!)
// and R(r) ~ r^m sum_j a_j sqrt(2(n_j+1)) (-1)^j binom(j+m, j).
double gamma_small_r(double c, int m, const std::vector<double>& a) {
  double lead = std::sqrt(c) * a[0] * std::sqrt(2.0 * (m + 1)) * 0.5;
  for (int i = 1; i <= m + 1; ++i) lead *= (i <= m ? 0.5 * c : 1.0) / i;
  double at_zero = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    at_zero += a[j] * std::sqrt(2.0 * (m + 2.0 * j + 1)) * sign * binomial(static_cast<int>(j) + m, static_cast<int>(j));
  }
  return lead / at_zero;
}

// Weighted least-squares ratio <R, K R> / <R, R> on a Gauss rule.
double gamma_least_squares(double c, int m, const std::vector<double>& a, const GaussRule& g) {
  const int count = static_cast<int>(a.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.nodes[i];
    const auto z = zernike_radial_all(m, count, r);
    const auto hk = zernike_hankel_all(m, count, c * r);
    double rv = 0.0;
    double kv = 0.0;
    for (int j = 0; j < count; ++j) {
      rv += a[j] * z[j];
      kv += a[j] * hk[j];
    }
    kv *= std::sqrt(c);
    num += g.weights[i] * r * rv * kv;
    den += g.weights[i] * r * rv * rv;
  }
  return num / den;
}

cplx i_pow(int m) {
  switch (m % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

double DiskMode::scale(double c) const {
  const double angular = (id.m == 0) ? 2.0 * kPi : kPi;
  return c / (2.0 * kPi) * std::abs(alpha) / std::sqrt(angular);
}

std::size_t DiskBasis::index_of(const ModeId& id) const {
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i].id == id) return i;
  }
  throw ParameterError("mode (" + std::to_string(id.m) + "," + std::to_string(id.n) + "," +
                       std::to_string(id.ell) + ") not in basis");
}

int default_truncation(double c, int n_max) {
  return 2 * n_max + static_cast<int>(std::ceil(c)) + 10;
}

SymmetricTridiagonal assemble_sl_matrix(double c, int m, int J) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw ParameterError("assemble_sl_matrix: c must be >= 0");
  if (m < 0 || J < 1) throw ParameterError("assemble_sl_matrix: need m >= 0 and J >= 1");

  // <r^2 Z_j, Z_k> = (1/2) int_0^1 t Z_j Z_k dt with t = r^2; the integrand is
  // a polynomial of degree m + j + k + 1 in t.
  const int nodes = (m + 2 * J + 1) / 2 + 2;
  const GaussRule g = gauss_legendre(nodes, 0.0, 1.0);
  std::vector<double> diag_moment(J, 0.0);
  std::vector<double> off_moment(J > 1 ? J - 1 : 0, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g.nodes[i];
    const auto z = zernike_radial_all(m, J, std::sqrt(t));
    const double w = 0.5 * g.weights[i] * t;
    for (int j = 0; j < J; ++j) {
      diag_moment[j] += w * z[j] * z[j];
      if (j + 1 < J) off_moment[j] += w * z[j] * z[j + 1];
    }
  }
  SymmetricTridiagonal out;
  out.diagonal.resize(J);
  out.off_diagonal.resize(J - 1);
  const double c2 = c * c;
  for (int j = 0; j < J; ++j) {
    const double n = m + 2.0 * j;
    out.diagonal[j] = n * (n + 2.0) + c2 * diag_moment[j];
    if (j + 1 < J) out.off_diagonal[j] = c2 * off_moment[j];
  }
  return out;
}

DiskBasis compute_disk_basis(double c, int m_max, int n_max, int truncation) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("compute_disk_basis: c must be > 0");
  if (m_max < 0 || n_max < 0) throw ParameterError("compute_disk_basis: m_max and n_max must be >= 0");
  const int minimum = default_truncation(c, n_max);
  if (truncation == 0) truncation = minimum;
  if (truncation < minimum) {
    throw ParameterError("compute_disk_basis: truncation below 2 n_max + ceil(c) + 10 = " +
                         std::to_string(minimum));
  }

  DiskBasis basis;
  basis.c = c;
  basis.m_max = m_max;
  basis.n_max = n_max;
  basis.truncation = truncation;

  const GaussRule g = gauss_legendre(truncation + m_max / 2 + 30, 0.0, 1.0);
  for (int m = 0; m <= m_max; ++m) {
    const SymmetricTridiagonal t = assemble_sl_matrix(c, m, truncation);
    const EigenSystem es = sym_eig(t);
    for (int n = 0; n <= n_max; ++n) {
      std::vector<double> a(truncation);
      for (int j = 0; j < truncation; ++j) a[j] = es.vector_entry(j, n);
      const auto peak = std::max_element(a.begin(), a.end(), [](double x, double y) {
        return std::abs(x) < std::abs(y);
      });
      if (*peak < 0.0) {
        for (double& v : a) v = -v;
      }
      a = refine_tail(t, es.values[n], std::move(a));

      double gamma = gamma_least_squares(c, m, a, g);
      // Deep modes: the quadrature ratio loses relative accuracy once gamma
      // drops far below the size of the individual Hankel terms.
      if (std::abs(gamma) < 1e-4) gamma = gamma_small_r(c, m, a);

      DiskMode mode;
      mode.chi = es.values[n];
      mode.chi_radial = mode.chi + 0.75;
      mode.gamma = gamma;
      mode.alpha = 2.0 * kPi * i_pow(m) * gamma / std::sqrt(c);
      mode.coeffs = a;
      mode.usable = std::isfinite(gamma) && std::abs(gamma) >= 1e-300;
      for (int ell = 1; ell <= (m == 0 ? 1 : 2); ++ell) {
        mode.id = ModeId{m, n, ell};
        basis.modes.push_back(mode);
      }
    }
  }
  std::stable_sort(basis.modes.begin(), basis.modes.end(), [](const DiskMode& x, const DiskMode& y) {
    return std::tuple(x.degree(), x.id.m, x.id.ell) < std::tuple(y.degree(), y.id.m, y.id.ell);
  });
  return basis;
}

double radial_value(const DiskMode& mode, double r) {
  const auto z = zernike_radial_all(mode.id.m, static_cast<int>(mode.coeffs.size()), r);
  double s = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) s += mode.coeffs[j] * z[j];
  return s;
}

double angular_value(const ModeId& id, Point2 x) {
  if (id.m == 0) return 1.0;
  const double theta = std::atan2(x.y, x.x);
  return id.ell == 1 ? std::cos(id.m * theta) : std::sin(id.m * theta);
}

double eval_psi(const DiskBasis& basis, std::size_t index, Point2 x) {
  const DiskMode& mode = basis.modes.at(index);
  const double rho = norm(x);
  const double y = angular_value(mode.id, x);
  const double s = mode.scale(basis.c);
  if (rho <= 1.0) return s * radial_value(mode, rho) * y;
  if (!mode.usable) throw ComputationError("eval_psi: mode has no usable eigenvalue for extension");
  const auto hk = zernike_hankel_all(mode.id.m, static_cast<int>(mode.coeffs.size()), basis.c * rho);
  double sum = 0.0;
  for (std::size_t j = 0; j < hk.size(); ++j) sum += mode.coeffs[j] * hk[j];
  return s * y * std::sqrt(basis.c) / mode.gamma * sum;
}

QuadratureRule polar_gauss_disk(double radius, int n_r, int n_theta, Point2 center) {
  if (!(radius > 0.0)) throw ParameterError("polar_gauss_disk: radius must be > 0");
  if (n_r < 1 || n_theta < 2 || n_theta % 2 != 0) {
    throw ParameterError("polar_gauss_disk: need n_r >= 1 and even n_theta >= 2");
  }
  const GaussRule g = gauss_legendre(n_r, 0.0, radius);
  const int half = n_theta / 2;
  const double dtheta = 2.0 * kPi / n_theta;
  QuadratureRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(n_r) * n_theta);
  rule.weights.reserve(rule.nodes.capacity());
  for (int j = 0; j < half; ++j) {
    const double theta = (j + 0.5) * dtheta;
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    for (int i = 0; i < n_r; ++i) {
      rule.nodes.push_back({g.nodes[i] * ct, g.nodes[i] * st});
      rule.weights.push_back(g.weights[i] * g.nodes[i] * dtheta);
    }
  }
  const std::size_t first = rule.nodes.size();
  for (std::size_t i = 0; i < first; ++i) {
    rule.nodes.push_back(-rule.nodes[i]);
    rule.weights.push_back(rule.weights[i]);
  }
  rule.paired = true;
  if (center.x != 0.0 || center.y != 0.0) {
    for (auto& p : rule.nodes) p = p + center;
    rule.paired = false;
  }
  return rule;
}

QuadratureRule data_domain_rule(double c, int m_max, int n_max, double k, int n_r, int n_theta) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ParameterError("data domain rule: k must be > 0");
  if (!(c > 0.0)) throw ParameterError("data domain rule: c must be > 0");
  const int cc = static_cast<int>(std::ceil(c));
  if (n_r == 0) n_r = m_max + 2 * n_max + cc + 20;
  if (n_theta == 0) n_theta = 2 * (2 * m_max + cc + 16);
  return polar_gauss_disk(c / (2.0 * k), n_r, n_theta);
}

ScaledDiskBasis scale_to_data_domain(const DiskBasis& basis, double k, int n_r, int n_theta) {
  ScaledDiskBasis out;
  out.quad = data_domain_rule(basis.c, basis.m_max, basis.n_max, k, n_r, n_theta);
  out.base = basis;
  out.k = k;
  out.radius = basis.c / (2.0 * k);

  const std::size_t nodes = out.quad.size();
  const std::size_t count = basis.size();
  out.values.assign(count * nodes, 0.0);
  std::vector<std::vector<std::size_t>> by_m(basis.m_max + 1);
  for (std::size_t i = 0; i < count; ++i) by_m[basis.modes[i].id.m].push_back(i);
  std::vector<double> scale(count);
  for (std::size_t i = 0; i < count; ++i) scale[i] = basis.modes[i].scale(basis.c) / out.radius;

  const double inv_h = 1.0 / out.radius;
  for (std::size_t j = 0; j < nodes; ++j) {
    const Point2 p = inv_h * out.quad.nodes[j];
    const double rho = std::min(norm(p), 1.0);
    const double theta = std::atan2(p.y, p.x);
    for (int m = 0; m <= basis.m_max; ++m) {
      if (by_m[m].empty()) continue;
      const auto z = zernike_radial_all(m, basis.truncation, rho);
      const double cm = std::cos(m * theta);
      const double sm = std::sin(m * theta);
      for (std::size_t i : by_m[m]) {
        const DiskMode& mode = basis.modes[i];
        double r = 0.0;
        for (std::size_t q = 0; q < mode.coeffs.size(); ++q) r += mode.coeffs[q] * z[q];
        const double y = (m == 0) ? 1.0 : (mode.id.ell == 1 ? cm : sm);
        out.values[i * nodes + j] = scale[i] * r * y;
      }
    }
  }
  return out;
}

double eval_scaled_psi(const ScaledDiskBasis& basis, std::size_t mode, Point2 x) {
  const double inv_h = 1.0 / basis.radius;
  return inv_h * eval_psi(basis.base, mode, inv_h * x);
}

}  // namespace prolate
