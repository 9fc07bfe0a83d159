#pragma once

// Disk eigensystem: Sturm-Liouville eigenvalues chi, Fourier-operator
// eigenvalues alpha and radial expansions in the orthonormal disk-polynomial
// basis, plus the version dilated onto a data disk of radius c/(2k).

#include <cstddef>
#include <vector>

#include "prolate/numerics.hpp"

namespace prolate {

struct ModeId {
  int m = 0;
  int n = 0;
  int ell = 1;  // 1: cos(m theta), 2: sin(m theta)

  friend bool operator==(const ModeId&, const ModeId&) = default;
};

struct DiskMode {
  ModeId id;
  double chi = 0.0;
  double chi_radial = 0.0;
  cplx alpha;
  double gamma = 0.0;
  std::vector<double> coeffs;  // radial factor sum_j coeffs[j] Z_j(r), unit 2-norm
  bool usable = true;

  int degree() const { return id.m + 2 * id.n; }
  // psi = scale * R(r) * Y(theta) gives ||psi||_{L2(B(0,1))} = (c/2pi)|alpha|.
  double scale(double c) const;
};

struct DiskBasis {
  double c = 0.0;
  int m_max = 0;
  int n_max = 0;
  int truncation = 0;
  std::vector<DiskMode> modes;  // ordered by (m + 2n, m, ell)

  std::size_t size() const { return modes.size(); }
  std::size_t index_of(const ModeId& id) const;  // throws ParameterError if absent
};

/// Default Zernike truncation 2 n_max + ceil(c) + 10.
int default_truncation(double c, int n_max);

/// Galerkin matrix of the disk Sturm-Liouville operator for azimuthal order m
/// in the basis Z_0 .. Z_{J-1}. c = 0 is accepted and yields the diagonal
/// n(n+2).
SymmetricTridiagonal assemble_sl_matrix(double c, int m, int J);

/// Eigensystem for m <= m_max, n <= n_max. truncation = 0 selects the default.
DiskBasis compute_disk_basis(double c, int m_max, int n_max, int truncation = 0);

/// Radial factor R(r) = sum_j a_j Z_j(r) for 0 <= r <= 1 (unnormalised).
double radial_value(const DiskMode& mode, double r);

/// Angular factor cos(m theta) or sin(m theta) evaluated at the direction of x.
double angular_value(const ModeId& id, Point2 x);

/// psi_{m,n,ell}(x; c). Inside the unit disk the expansion is summed
/// directly; outside, the extension integral is evaluated in closed form.
double eval_psi(const DiskBasis& basis, std::size_t mode, Point2 x);

/// Disk of radius `radius` with a Gauss rule in r (n_r nodes) and the
/// trapezoid rule in theta (n_theta nodes, even). The rule is paired.
QuadratureRule polar_gauss_disk(double radius, int n_r, int n_theta, Point2 center = {});

struct ScaledDiskBasis {
  DiskBasis base;
  double k = 0.0;
  double radius = 0.0;        // h = c / (2k)
  QuadratureRule quad;        // rule on D_F
  std::vector<double> values; // values[i * quad.size() + j] = psi^F_i(node j)

  std::size_t size() const { return base.size(); }
  double kernel_scale() const { return base.c / (radius * radius); }
  cplx eigenvalue(std::size_t i) const { return radius * radius * base.modes[i].alpha; }
  double node_value(std::size_t i, std::size_t j) const { return values[i * quad.size() + j]; }
};

/// The paired polar rule on D_F = B(0, c/(2k)) used by scale_to_data_domain.
QuadratureRule data_domain_rule(double c, int m_max, int n_max, double k, int n_r = 0, int n_theta = 0);

/// Dilate onto D_F = B(0, c/(2k)): psi^F(x) = (1/h) psi(x/h), h = c/(2k).
/// n_r, n_theta = 0 select defaults sized to the basis.
ScaledDiskBasis scale_to_data_domain(const DiskBasis& basis, double k, int n_r = 0, int n_theta = 0);

/// Scaled eigenfunction at an arbitrary point of the plane.
double eval_scaled_psi(const ScaledDiskBasis& basis, std::size_t mode, Point2 x);

}  // namespace prolate
