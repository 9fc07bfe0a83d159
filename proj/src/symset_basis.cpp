#include "prolate/symset_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "prolate/errors.hpp"

namespace prolate {

namespace {

struct Block {
  Parity parity;
  EigenSystem es;
};

void check_inputs(double c, const QuadratureRule& quad) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("compute_symset_basis: c must be > 0");
  if (quad.size() == 0) throw ParameterError("compute_symset_basis: empty quadrature");
  if (quad.paired && quad.size() % 2 != 0) throw ParameterError("compute_symset_basis: paired rule of odd size");
  for (double w : quad.weights) {
    if (!(w > 0.0)) throw ParameterError("compute_symset_basis: weights must be positive");
  }
}

// 2 sqrt(w_i w_j) cos(kappa p_i.p_j) (or sin) over the first half of a
// paired rule.
DenseSymmetric parity_matrix(const QuadratureRule& quad, double kappa, Parity parity) {
  const std::size_t half = quad.size() / 2;
  DenseSymmetric a(half);
  std::vector<double> sw(half);
  for (std::size_t i = 0; i < half; ++i) sw[i] = std::sqrt(quad.weights[i]);
  for (std::size_t i = 0; i < half; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double phase = kappa * dot(quad.nodes[i], quad.nodes[j]);
      const double v = 2.0 * sw[i] * sw[j] * (parity == Parity::even ? std::cos(phase) : std::sin(phase));
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

struct Candidate {
  cplx alpha;
  std::size_t block;
  std::size_t column;
};

}  // namespace

std::vector<cplx> symset_spectrum(double c, const Geometry& geometry, const QuadratureRule& quad) {
  check_inputs(c, quad);
  const double h2 = geometry.h * geometry.h;
  const double kappa = c / h2;
  if (!quad.paired) throw ParameterError("symset_spectrum: the quadrature rule must be paired");
  std::vector<cplx> out;
  for (Parity parity : {Parity::even, Parity::odd}) {
    const auto es = sym_eig(parity_matrix(quad, kappa, parity), false);
    for (double v : es.values) out.push_back(parity == Parity::even ? cplx(v / h2, 0.0) : cplx(0.0, v / h2));
  }
  std::stable_sort(out.begin(), out.end(), [](cplx x, cplx y) { return std::abs(x) > std::abs(y); });
  return out;
}

SymSetBasis compute_symset_basis(double c, const Geometry& geometry, const QuadratureRule& quad, int n_modes) {
  check_inputs(c, quad);
  if (n_modes < 1) throw ParameterError("compute_symset_basis: n_modes must be >= 1");
  if (!quad.paired) {
    throw ParameterError("compute_symset_basis: the quadrature rule must be symmetric (paired nodes)");
  }
  const std::size_t n = quad.size();
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i) {
    if (!(quad.nodes[i + half] == -quad.nodes[i]) || quad.weights[i + half] != quad.weights[i]) {
      throw ParameterError("compute_symset_basis: rule is flagged paired but nodes are not mirrored");
    }
  }

  SymSetBasis basis;
  basis.c = c;
  basis.geometry = geometry;
  basis.quad = quad;
  const double h2 = geometry.h * geometry.h;
  const double kappa = c / h2;

  std::vector<Block> blocks;
  for (Parity parity : {Parity::even, Parity::odd}) {
    blocks.push_back({parity, sym_eig(parity_matrix(quad, kappa, parity), true)});
  }

  std::vector<Candidate> all;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& es = blocks[b].es;
    for (std::size_t k = 0; k < es.values.size(); ++k) {
      const double v = es.values[k] / h2;
      all.push_back({blocks[b].parity == Parity::even ? cplx(v, 0.0) : cplx(0.0, v), b, k});
    }
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Candidate& x, const Candidate& y) { return std::abs(x.alpha) > std::abs(y.alpha); });
  for (const auto& cand : all) basis.spectrum.push_back(cand.alpha);

  const double floor = 1e-14 * std::abs(all.front().alpha);
  for (const auto& cand : all) {
    if (basis.modes.size() == static_cast<std::size_t>(n_modes)) break;
    if (std::abs(cand.alpha) <= floor) break;
    const auto& es = blocks[cand.block].es;
    SymSetMode mode;
    mode.parity = blocks[cand.block].parity;
    mode.alpha = cand.alpha;
    mode.values.resize(n);
    const double sign_odd = mode.parity == Parity::even ? 1.0 : -1.0;
    for (std::size_t i = 0; i < half; ++i) {
      const double v = es.vector_entry(i, cand.column) / std::sqrt(quad.weights[i]);
      mode.values[i] = v;
      mode.values[i + half] = sign_odd * v;
    }
    // sum_w v^2 over the full rule is 2 for a unit half-vector.
    const double target = c / (2.0 * kPi) * std::abs(cand.alpha);
    const double scale = target / std::sqrt(2.0);
    std::size_t peak = 0;
    for (std::size_t i = 1; i < half; ++i) {
      if (std::abs(mode.values[i]) > std::abs(mode.values[peak])) peak = i;
    }
    const double sign = mode.values[peak] < 0.0 ? -1.0 : 1.0;
    for (double& v : mode.values) v *= sign * scale;
    basis.modes.push_back(std::move(mode));
  }
  basis.truncated = basis.modes.size() < static_cast<std::size_t>(n_modes);
  return basis;
}

double eval_symset_psi(const SymSetBasis& basis, std::size_t n, Point2 p) {
  const SymSetMode& mode = basis.modes.at(n);
  const double kappa = basis.kernel_scale();
  const double h2 = basis.geometry.h * basis.geometry.h;
  const std::size_t half = basis.quad.size() / 2;
  double s = 0.0;
  if (mode.parity == Parity::even) {
    for (std::size_t j = 0; j < half; ++j) {
      s += basis.quad.weights[j] * std::cos(kappa * dot(p, basis.quad.nodes[j])) * mode.values[j];
    }
    return 2.0 * s / (h2 * mode.alpha.real());
  }
  for (std::size_t j = 0; j < half; ++j) {
    s += basis.quad.weights[j] * std::sin(kappa * dot(p, basis.quad.nodes[j])) * mode.values[j];
  }
  return 2.0 * s / (h2 * mode.alpha.imag());
}

}  // namespace prolate
