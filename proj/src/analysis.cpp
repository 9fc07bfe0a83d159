#include "prolate/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "prolate/errors.hpp"

namespace prolate {

namespace {

void check_samples(const ScaledDiskBasis& b, const std::vector<cplx>& u) {
  if (u.size() != b.quad.size()) throw ParameterError("samples do not match the basis quadrature");
}

std::vector<double> quad_norms(const ScaledDiskBasis& b) {
  std::vector<double> out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < b.quad.size(); ++j) s += b.quad.weights[j] * b.node_value(i, j) * b.node_value(i, j);
    out[i] = std::sqrt(s);
  }
  return out;
}

// <u, psi_hat_i> for every mode.
std::vector<cplx> inner(const ScaledDiskBasis& b, const std::vector<cplx>& u, const std::vector<double>& norms) {
  std::vector<cplx> out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < b.quad.size(); ++j) s += b.quad.weights[j] * b.node_value(i, j) * u[j];
    out[i] = s / norms[i];
  }
  return out;
}

double l2(const QuadratureRule& q, const std::vector<cplx>& v) {
  double s = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) s += q.weights[j] * std::norm(v[j]);
  return std::sqrt(s);
}

std::vector<cplx> resum(const ScaledDiskBasis& b, const std::vector<cplx>& coef, const std::vector<double>& norms,
                        double alpha) {
  std::vector<cplx> out(b.quad.size(), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (alpha > 0.0 && !(std::fma(b.base.modes[i].chi, alpha, -1.0) < 0.0)) continue;
    const cplx c = coef[i] / norms[i];
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * b.node_value(i, j);
  }
  return out;
}

ValidationCheck make_check(std::string name, double residual, double threshold) {
  return {std::move(name), residual, threshold, residual <= threshold};
}

// Gram matrix of node-value vectors: max off-diagonal of the normalised Gram.
double gram_offdiag(const QuadratureRule& q, std::size_t count, auto value) {
  std::vector<double> norms(count);
  for (std::size_t i = 0; i < count; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) s += q.weights[j] * value(i, j) * value(i, j);
    norms[i] = std::sqrt(s);
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = a + 1; b < count; ++b) {
      double s = 0.0;
      for (std::size_t j = 0; j < q.size(); ++j) s += q.weights[j] * value(a, j) * value(b, j);
      worst = std::max(worst, std::abs(s) / (norms[a] * norms[b]));
    }
  }
  return worst;
}

// |alpha| recovered as ||K psi|| / ||psi|| over a subset of nodes, relative to
// the stored |mu|. Modes below 1e-6 of the leading eigenvalue are skipped.
double eigen_norm_mismatch(const QuadratureRule& q, double kappa, const std::vector<double>& mu_abs, auto value) {
  const std::size_t n = q.size();
  const std::size_t samples = std::min<std::size_t>(64, n);
  const std::size_t stride = n / samples;
  const double top = *std::max_element(mu_abs.begin(), mu_abs.end());
  std::vector<double> kpsi2(mu_abs.size(), 0.0);
  std::vector<double> psi2(mu_abs.size(), 0.0);
  std::vector<double> cs(n);
  std::vector<double> sn(n);
  for (std::size_t t = 0; t < samples; ++t) {
    const Point2 x = q.nodes[t * stride];
    for (std::size_t j = 0; j < n; ++j) {
      const double ph = kappa * dot(x, q.nodes[j]);
      cs[j] = q.weights[j] * std::cos(ph);
      sn[j] = q.weights[j] * std::sin(ph);
    }
    for (std::size_t i = 0; i < mu_abs.size(); ++i) {
      if (mu_abs[i] < 1e-6 * top) continue;
      double re = 0.0;
      double im = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double v = value(i, j);
        re += cs[j] * v;
        im += sn[j] * v;
      }
      kpsi2[i] += re * re + im * im;
      const double v = value(i, t * stride);
      psi2[i] += v * v;
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < mu_abs.size(); ++i) {
    if (mu_abs[i] < 1e-6 * top || psi2[i] == 0.0) continue;
    worst = std::max(worst, std::abs(std::sqrt(kpsi2[i] / psi2[i]) - mu_abs[i]) / mu_abs[i]);
  }
  return worst;
}

}  // namespace

ScaledDiskBasis unit_disk_view(const DiskBasis& basis) { return scale_to_data_domain(basis, 0.5 * basis.c); }

std::vector<cplx> project_pi_alpha(const ScaledDiskBasis& basis, const std::vector<cplx>& u, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("alpha must be > 0");
  check_samples(basis, u);
  const auto norms = quad_norms(basis);
  return resum(basis, inner(basis, u, norms), norms, alpha);
}

SobolevNorm sobolev_norm_tilde(const ScaledDiskBasis& basis, const std::vector<cplx>& u, double s) {
  if (!(s >= 0.0)) throw ParameterError("sobolev order must be >= 0");
  check_samples(basis, u);
  const auto norms = quad_norms(basis);
  const auto coef = inner(basis, u, norms);
  SobolevNorm out;
  double acc = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) acc += std::pow(basis.base.modes[i].chi, s) * std::norm(coef[i]);
  out.value = std::sqrt(acc);
  const auto all = resum(basis, coef, norms, 0.0);
  std::vector<cplx> tail(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) tail[j] = u[j] - all[j];
  const double un = l2(basis.quad, u);
  out.tail_fraction = un > 0.0 ? l2(basis.quad, tail) / un : 0.0;
  return out;
}

ProjectionReport projection_report(const ScaledDiskBasis& basis, const std::vector<cplx>& u, double alpha, double s) {
  ProjectionReport r;
  r.alpha = alpha;
  const auto p = project_pi_alpha(basis, u, alpha);
  std::vector<cplx> diff(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) diff[j] = p[j] - u[j];
  for (const auto& m : basis.base.modes) r.retained += std::fma(m.chi, alpha, -1.0) < 0.0 ? 1 : 0;
  r.error_l2 = l2(basis.quad, diff);
  r.bound = std::pow(alpha, 0.5 * s) * sobolev_norm_tilde(basis, u, s).value;
  r.passed = r.error_l2 <= r.bound;
  return r;
}

std::vector<cplx> extrapolate(const DataGrid& data, const ScaledDiskBasis& basis, const std::vector<Point2>& targets,
                              double alpha_floor) {
  if (data.quad.nodes != basis.quad.nodes || data.quad.weights != basis.quad.weights) {
    throw ParameterError("data nodes do not match the basis quadrature");
  }
  const auto norms = quad_norms(basis);
  double top = 0.0;
  for (const auto& m : basis.base.modes) top = std::max(top, std::abs(m.alpha));
  std::vector<cplx> out(targets.size(), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& mode = basis.base.modes[i];
    if (!mode.usable || std::abs(mode.alpha) < alpha_floor * top) continue;
    cplx s = 0.0;
    for (std::size_t j = 0; j < basis.quad.size(); ++j) {
      if (!data.missing.empty() && data.missing[j]) continue;
      s += basis.quad.weights[j] * basis.node_value(i, j) * data.values[j];
    }
    const cplx a = s / (norms[i] * norms[i]);
    for (std::size_t t = 0; t < targets.size(); ++t) out[t] += a * eval_scaled_psi(basis, i, targets[t]);
  }
  return out;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

ValidationReport validate_basis(const DiskBasis& basis) {
  ValidationReport rep;
  const double c2 = basis.c * basis.c;
  double bracket = 0.0;
  for (const auto& m : basis.modes) {
    const double d = m.degree();
    const double lo = d * (d + 2.0);
    bracket = std::max({bracket, lo - m.chi, m.chi - (lo + c2)});
  }
  // Strict inequalities with an absolute slack of 1e-9.
  rep.checks.push_back({"bracketing", std::max(bracket, 0.0), 1e-9, bracket < 1e-9});

  const auto view = unit_disk_view(basis);
  auto value = [&view](std::size_t i, std::size_t j) { return view.node_value(i, j); };
  rep.checks.push_back(make_check("gram_offdiagonal", gram_offdiag(view.quad, view.size(), value), 1e-8));

  const auto norms = quad_norms(view);
  double norm_res = 0.0;
  std::vector<double> mu_abs(view.size());
  for (std::size_t i = 0; i < view.size(); ++i) {
    const auto& m = basis.modes[i];
    mu_abs[i] = std::abs(m.alpha);
    const double expect = basis.c / (2.0 * kPi) * std::abs(m.alpha);
    if (expect > 0.0) norm_res = std::max(norm_res, std::abs(norms[i] * norms[i] / (expect * expect) - 1.0));
  }
  rep.checks.push_back(make_check("quadrature_norm", norm_res, 1e-6));
  rep.checks.push_back(make_check("norm_alpha_consistency", eigen_norm_mismatch(view.quad, basis.c, mu_abs, value), 1e-6));

  return rep;
}

ValidationReport validate_basis(const SymSetBasis& basis) {
  ValidationReport rep;
  const auto& q = basis.quad;
  auto value = [&basis](std::size_t i, std::size_t j) { return basis.node_value(i, j); };
  rep.checks.push_back(make_check("gram_offdiagonal", gram_offdiag(q, basis.size(), value), 1e-8));

  double norm_res = 0.0;
  std::vector<double> mu_abs(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    mu_abs[i] = std::abs(basis.eigenvalue(i));
    double s = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) s += q.weights[j] * value(i, j) * value(i, j);
    const double expect = basis.c / (2.0 * kPi) * std::abs(basis.modes[i].alpha);
    norm_res = std::max(norm_res, std::abs(s / (expect * expect) - 1.0));
  }
  rep.checks.push_back(make_check("quadrature_norm", norm_res, 1e-10));
  rep.checks.push_back(
      make_check("norm_alpha_consistency", eigen_norm_mismatch(q, basis.kernel_scale(), mu_abs, value), 1e-6));

  double parity = 0.0;
  const std::size_t half = q.size() / 2;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double sign = basis.modes[i].parity == Parity::even ? 1.0 : -1.0;
    double scale = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) scale = std::max(scale, std::abs(value(i, j)));
    for (std::size_t j = 0; j < half; ++j) {
      parity = std::max(parity, std::abs(value(i, j + half) - sign * value(i, j)) / scale);
    }
    // Even modes have real alpha, odd modes imaginary alpha.
    const cplx a = basis.modes[i].alpha;
    parity = std::max(parity, std::abs(sign > 0 ? a.imag() : a.real()) / std::abs(a));
  }
  rep.checks.push_back(make_check("parity", parity, 1e-12));

  if (basis.spectrum.size() == q.size()) {
    double sum = 0.0;
    for (auto a : basis.spectrum) sum += std::norm(a);
    double area = 0.0;
    for (double w : q.weights) area += w;
    area /= basis.geometry.h * basis.geometry.h;
    rep.checks.push_back(make_check("hilbert_schmidt", std::abs(sum / (area * area) - 1.0), 1e-10));
  }
  return rep;
}

ValidationCheck cross_check_disk(const SymSetBasis& symset, const DiskBasis& disk, std::size_t count,
                                 double threshold) {
  std::vector<double> d;
  for (const auto& m : disk.modes) d.push_back(std::abs(m.alpha));
  std::sort(d.begin(), d.end(), std::greater<>());
  count = std::min({count, d.size(), symset.size()});
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    worst = std::max(worst, std::abs(std::abs(symset.modes[i].alpha) - d[i]) / d[i]);
  }
  return make_check("disk_cross_check", worst, threshold);
}

}  // namespace prolate
