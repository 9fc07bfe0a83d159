#include "prolate/recon.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "prolate/errors.hpp"

namespace prolate {

namespace {

constexpr double kMaxMissingWeight = 0.10;

void check_nodes(const DataGrid& data, const QuadratureRule& quad) {
  if (data.quad.nodes != quad.nodes || data.quad.weights != quad.weights) {
    throw ParameterError("data nodes do not match the basis quadrature");
  }
  if (data.values.size() != quad.size()) throw ParameterError("data value count does not match its nodes");
  if (data.missing_weight_fraction() > kMaxMissingWeight) {
    throw ComputationError("missing data nodes exceed 10% of the data-domain weight");
  }
}

// Data-side view shared by both basis kinds.
struct Modal {
  const QuadratureRule& quad;
  std::size_t count;
  std::function<double(std::size_t, std::size_t)> value;
  std::vector<cplx> mu;
  std::vector<double> norms;
};

Modal modal(const ScaledDiskBasis& b) {
  Modal m{b.quad, b.size(), [&b](std::size_t i, std::size_t j) { return b.node_value(i, j); }, {}, {}};
  for (std::size_t i = 0; i < b.size(); ++i) m.mu.push_back(b.eigenvalue(i));
  return m;
}

Modal modal(const SymSetBasis& b) {
  Modal m{b.quad, b.size(), [&b](std::size_t i, std::size_t j) { return b.node_value(i, j); }, {}, {}};
  for (std::size_t i = 0; i < b.size(); ++i) m.mu.push_back(b.eigenvalue(i));
  return m;
}

void fill_norms(Modal& m) {
  m.norms.assign(m.count, 0.0);
  for (std::size_t i = 0; i < m.count; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.quad.size(); ++j) s += m.quad.weights[j] * m.value(i, j) * m.value(i, j);
    m.norms[i] = std::sqrt(s);
  }
}

std::vector<cplx> coefficients(const DataGrid& data, Modal& m) {
  check_nodes(data, m.quad);
  fill_norms(m);
  std::vector<cplx> out(m.count);
  for (std::size_t i = 0; i < m.count; ++i) {
    if (m.mu[i] == cplx(0.0, 0.0) || m.norms[i] == 0.0) throw ComputationError("basis mode with zero eigenvalue");
    cplx s = 0.0;
    for (std::size_t j = 0; j < m.quad.size(); ++j) {
      if (!data.missing.empty() && data.missing[j]) continue;
      s += m.quad.weights[j] * m.value(i, j) * data.values[j];
    }
    out[i] = s / m.norms[i] / m.mu[i];
  }
  return out;
}

void assemble(ReconstructionResult& r, const DataGrid& data, Modal& m, const std::vector<cplx>& all, bool realify) {
  r.delta = data.delta;
  r.coefficients.clear();
  for (std::size_t i : r.cutoff_set) r.coefficients.push_back(all[i]);
  if (realify) {
    double im = 0.0;
    for (auto& c : r.coefficients) {
      im += c.imag() * c.imag();
      c = c.real();
    }
    r.realified = true;
    r.dropped_imaginary = std::sqrt(im);
  }
  const std::size_t n = m.quad.size();
  r.node_values.assign(n, cplx(0.0, 0.0));
  std::vector<cplx> fitted(n, cplx(0.0, 0.0));
  for (std::size_t t = 0; t < r.cutoff_set.size(); ++t) {
    const std::size_t i = r.cutoff_set[t];
    const cplx c = r.coefficients[t] / m.norms[i];
    for (std::size_t j = 0; j < n; ++j) {
      r.node_values[j] += c * m.value(i, j);
      fitted[j] += m.mu[i] * c * m.value(i, j);
    }
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!data.missing.empty() && data.missing[j]) continue;
    num += m.quad.weights[j] * std::norm(data.values[j] - fitted[j]);
    den += m.quad.weights[j] * std::norm(data.values[j]);
  }
  r.residual = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

std::vector<cplx> picard_coefficients(const DataGrid& data, const ScaledDiskBasis& basis) {
  auto m = modal(basis);
  return coefficients(data, m);
}

std::vector<cplx> picard_coefficients(const DataGrid& data, const SymSetBasis& basis) {
  auto m = modal(basis);
  return coefficients(data, m);
}

std::vector<std::size_t> cutoff_set_full(const ScaledDiskBasis& basis, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("alpha must be > 0");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    // Exact sign of chi * alpha - 1.
    if (std::fma(basis.base.modes[i].chi, alpha, -1.0) < 0.0) out.push_back(i);
  }
  return out;
}

double beta_of_alpha(const ScaledDiskBasis& basis, double alpha) {
  const auto set = cutoff_set_full(basis, alpha);
  if (set.empty()) throw EmptyCutoffError("empty cutoff set: alpha >= 1/chi_{0,0}");
  double beta = INFINITY;
  for (std::size_t i : set) beta = std::min(beta, std::abs(basis.eigenvalue(i)));
  return beta;
}

ReconstructionResult reconstruct_full(const DataGrid& data, const ScaledDiskBasis& basis, double alpha, bool realify) {
  ReconstructionResult r;
  r.alpha = alpha;
  r.cutoff_set = cutoff_set_full(basis, alpha);
  if (r.cutoff_set.empty()) throw EmptyCutoffError("empty cutoff set: alpha >= 1/chi_{0,0}");
  r.beta_alpha = beta_of_alpha(basis, alpha);
  // Smallest chi any uncomputed mode can have: (d)(d+2) with d the first
  // degree missing from the m or n range.
  const int m_next = basis.base.m_max + 1;
  const int d_next = 2 * (basis.base.n_max + 1);
  const double chi_floor = std::min<double>(m_next * (m_next + 2.0), d_next * (d_next + 2.0));
  r.cutoff_truncated = 1.0 / alpha > chi_floor;

  auto m = modal(basis);
  const auto all = coefficients(data, m);
  assemble(r, data, m, all, realify);

  auto keep = std::make_shared<const ScaledDiskBasis>(basis);
  std::vector<cplx> scaled;
  for (std::size_t t = 0; t < r.cutoff_set.size(); ++t) scaled.push_back(r.coefficients[t] / m.norms[r.cutoff_set[t]]);
  r.field = [keep, idx = r.cutoff_set, scaled](Point2 x) {
    cplx s = 0.0;
    if (norm(x) >= keep->radius) return s;
    for (std::size_t t = 0; t < idx.size(); ++t) s += scaled[t] * eval_scaled_psi(*keep, idx[t], x);
    return s;
  };
  return r;
}

ReconstructionResult reconstruct_partial(const DataGrid& data, const SymSetBasis& basis, double alpha, bool realify) {
  if (!(alpha > 0.0)) throw ParameterError("alpha must be > 0");
  ReconstructionResult r;
  r.alpha = alpha;
  r.beta_alpha = INFINITY;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double mu = std::abs(basis.eigenvalue(i));
    if (mu > alpha) {
      r.cutoff_set.push_back(i);
      r.beta_alpha = std::min(r.beta_alpha, mu);
    }
  }
  if (r.cutoff_set.empty()) throw EmptyCutoffError("no modes with |mu| above alpha");
  // Modes are sorted by |alpha|; if even the last one clears the cutoff,
  // further eigenvalues may do so too.
  r.cutoff_truncated = r.cutoff_set.size() == basis.size() && basis.spectrum.size() > basis.size() &&
                       std::abs(basis.spectrum[basis.size()]) * basis.geometry.h * basis.geometry.h > alpha;

  auto m = modal(basis);
  const auto all = coefficients(data, m);
  assemble(r, data, m, all, realify);

  auto keep = std::make_shared<const SymSetBasis>(basis);
  std::vector<cplx> scaled;
  for (std::size_t t = 0; t < r.cutoff_set.size(); ++t) scaled.push_back(r.coefficients[t] / m.norms[r.cutoff_set[t]]);
  r.field = [keep, idx = r.cutoff_set, scaled](Point2 x) {
    cplx s = 0.0;
    if (!contains(keep->geometry, x)) return s;
    for (std::size_t t = 0; t < idx.size(); ++t) s += scaled[t] * eval_symset_psi(*keep, idx[t], x);
    return s;
  };
  return r;
}

double choose_alpha_partial(double delta, double E, double sigma, double c0) {
  if (!(delta > 0.0) || !(E > 0.0) || !(sigma > 0.0) || !(c0 > 0.0)) {
    throw ParameterError("choose_alpha_partial: all inputs must be > 0");
  }
  return c0 * std::pow(delta / E, 1.0 / (1.0 + sigma));
}

}  // namespace prolate
