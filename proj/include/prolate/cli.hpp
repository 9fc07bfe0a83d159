#pragma once

// Command-line front end and the stability experiment driver.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "prolate/disk_basis.hpp"
#include "prolate/geometry.hpp"
#include "prolate/setup.hpp"
#include "prolate/symset_basis.hpp"

namespace prolate::cli {

struct RuleOptions {
  int m_max = 8;
  int n_max = 8;
  int resolution = 40;
  QuadScheme scheme = QuadScheme::automatic;
};

/// Data-domain rule for a setup: the D_F polar rule of an (m_max, n_max)
/// disk basis for full data, build_quadrature on L or M otherwise.
QuadratureRule data_rule(const ProblemSetup& setup, const RuleOptions& options);

struct StabilityRow {
  double delta = 0.0;
  double alpha = 0.0;
  std::size_t modes = 0;
  double beta = 0.0;
  double error_mean = 0.0;
  double error_max = 0.0;
  double bound = 0.0;             // delta / beta + projection_error
  double projection_error = 0.0;  // ||P_alpha q - q||
};

/// For every (delta, alpha): synthesise, add absolute noise of norm delta
/// with `seeds` consecutive seeds, reconstruct and measure the L2 error
/// on the data-domain rule. The contrast is discretised on that rule.
std::vector<StabilityRow> experiment_stability(const ProblemSetup& setup, const ScaledDiskBasis& basis,
                                               const std::vector<double>& deltas, const std::vector<double>& alphas,
                                               int seeds, std::uint64_t seed);
std::vector<StabilityRow> experiment_stability(const ProblemSetup& setup, const SymSetBasis& basis,
                                               const std::vector<double>& deltas, const std::vector<double>& alphas,
                                               int seeds, std::uint64_t seed);

/// Entry point of the `prolate` binary. Exit codes: 0 success, 1
/// computation failure, 2 bad configuration or arguments.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace prolate::cli
