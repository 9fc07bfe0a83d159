#pragma once

// Picard-criterion reconstruction of the contrast from Born data and
// spectral-cutoff regularisation.

#include <cstddef>
#include <functional>
#include <vector>

#include "prolate/disk_basis.hpp"
#include "prolate/forward.hpp"
#include "prolate/symset_basis.hpp"

namespace prolate {

struct ReconstructionResult {
  double alpha = 0.0;
  double beta_alpha = 0.0;           // smallest retained |mu|
  double delta = 0.0;                // absolute noise level carried by the data
  std::vector<std::size_t> cutoff_set;  // retained basis indices, basis order
  std::vector<cplx> coefficients;    // coefficient of each retained normalised mode
  std::vector<cplx> node_values;     // reconstruction on the basis quadrature
  std::function<cplx(Point2)> field; // zero outside the data domain
  double residual = 0.0;             // relative data misfit of the retained modes
  bool realified = false;
  double dropped_imaginary = 0.0;    // L2 norm of the discarded imaginary part
  bool cutoff_truncated = false;     // the cutoff set may reach past the computed modes

  std::size_t mode_count() const { return cutoff_set.size(); }
};

/// Coefficients <u, psi_hat_i> / mu_i for every basis mode, psi_hat the
/// L2-normalised mode and mu_i the eigenvalue of the scaled operator.
std::vector<cplx> picard_coefficients(const DataGrid& data, const ScaledDiskBasis& basis);
std::vector<cplx> picard_coefficients(const DataGrid& data, const SymSetBasis& basis);

/// Cutoff set {i : chi_i < 1/alpha}, strict.
std::vector<std::size_t> cutoff_set_full(const ScaledDiskBasis& basis, double alpha);

/// min over the cutoff set of |mu_i| = h^2 |alpha_i|.
double beta_of_alpha(const ScaledDiskBasis& basis, double alpha);

ReconstructionResult reconstruct_full(const DataGrid& data, const ScaledDiskBasis& basis, double alpha,
                                      bool realify = false);

/// Spectral cutoff {|mu_n| > alpha} on a symmetric-set basis.
ReconstructionResult reconstruct_partial(const DataGrid& data, const SymSetBasis& basis, double alpha,
                                         bool realify = false);

/// c0 (delta / E)^(1 / (1 + sigma)).
double choose_alpha_partial(double delta, double E, double sigma, double c0);

}  // namespace prolate
