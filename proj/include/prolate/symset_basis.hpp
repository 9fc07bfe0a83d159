#pragma once

// Nystrom eigensystem of the Fourier-type operator on a symmetric set A_h:
//   mu_n psi_n(p) = int_{A_h} exp(i kappa p.p') psi_n(p') dp',  kappa = c / h^2,
// with mu_n = h^2 alpha_n and alpha_n the eigenvalue on the unscaled set A.

#include <cstddef>
#include <vector>

#include "prolate/geometry.hpp"
#include "prolate/numerics.hpp"

namespace prolate {

enum class Parity { even, odd };

struct SymSetMode {
  Parity parity = Parity::even;
  cplx alpha;                 // real for even modes, imaginary for odd ones
  std::vector<double> values; // at quadrature nodes; sum w v^2 = (c/2pi)^2 |alpha|^2
};

struct SymSetBasis {
  double c = 0.0;
  Geometry geometry;
  QuadratureRule quad;
  std::vector<SymSetMode> modes;  // |alpha| descending
  std::vector<cplx> spectrum;     // every Nystrom eigenvalue alpha, |alpha| descending
  bool truncated = false;         // fewer than the requested modes cleared the floor

  std::size_t size() const { return modes.size(); }
  double kernel_scale() const { return c / (geometry.h * geometry.h); }
  cplx eigenvalue(std::size_t i) const { return geometry.h * geometry.h * modes[i].alpha; }
  double node_value(std::size_t i, std::size_t j) const { return modes[i].values[j]; }
};

/// Eigenpairs with the n_modes largest |alpha| (above 1e-14 |alpha_0|).
/// Paired rules are split into even (cos) and odd (sin) blocks of half size.
SymSetBasis compute_symset_basis(double c, const Geometry& geometry, const QuadratureRule& quad, int n_modes);

/// All Nystrom eigenvalues alpha, |alpha| descending, without eigenvectors.
std::vector<cplx> symset_spectrum(double c, const Geometry& geometry, const QuadratureRule& quad);

/// Natural Nystrom interpolant (1/mu) sum_j w_j exp(i kappa p.p_j) psi(p_j),
/// valid inside and outside the set.
double eval_symset_psi(const SymSetBasis& basis, std::size_t n, Point2 p);

}  // namespace prolate
