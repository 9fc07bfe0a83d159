#pragma once

// Spectral-cutoff projections, spectral Sobolev norms, band-limited
// extrapolation and basis self-validation.

#include <cstddef>
#include <string>
#include <vector>

#include "prolate/disk_basis.hpp"
#include "prolate/forward.hpp"
#include "prolate/symset_basis.hpp"

namespace prolate {

/// The disk basis on B(0,1) with its own quadrature (the k = c/2 dilation).
ScaledDiskBasis unit_disk_view(const DiskBasis& basis);

/// sum over chi < 1/alpha of <u, psi_hat> psi_hat, on the basis nodes.
std::vector<cplx> project_pi_alpha(const ScaledDiskBasis& basis, const std::vector<cplx>& u, double alpha);

struct ProjectionReport {
  double alpha = 0.0;
  std::size_t retained = 0;
  double error_l2 = 0.0;
  double bound = 0.0;
  bool passed = false;
};

/// ||pi_alpha u - u|| against alpha^(s/2) ||u||_s.
ProjectionReport projection_report(const ScaledDiskBasis& basis, const std::vector<cplx>& u, double alpha, double s);

struct SobolevNorm {
  double value = 0.0;          // sqrt(sum chi^s |<u, psi_hat>|^2) over computed modes
  double tail_fraction = 0.0;  // ||u - Pi u|| / ||u||, Pi the projection on all computed modes
};

SobolevNorm sobolev_norm_tilde(const ScaledDiskBasis& basis, const std::vector<cplx>& u, double s);

/// Band-limited extension of data on D_F to arbitrary points. Modes with
/// |alpha| < alpha_floor * max |alpha| (and unusable modes) are dropped.
std::vector<cplx> extrapolate(const DataGrid& data, const ScaledDiskBasis& basis, const std::vector<Point2>& targets,
                              double alpha_floor = 0.0);

struct ValidationCheck {
  std::string check;
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool passed() const;
};

ValidationReport validate_basis(const DiskBasis& basis);
ValidationReport validate_basis(const SymSetBasis& basis);

/// Relative |alpha| mismatch between a symmetric-set basis on a disk and the
/// disk basis, over the leading `count` modes.
ValidationCheck cross_check_disk(const SymSetBasis& symset, const DiskBasis& disk, std::size_t count,
                                 double threshold = 1e-4);

}  // namespace prolate
