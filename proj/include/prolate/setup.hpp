#pragma once

// Problem setup: contrast, measurement regime and the scale parameter c,
// with the containment check of the contrast support in the data domain.

#include <string>
#include <vector>

#include "prolate/forward.hpp"
#include "prolate/geometry.hpp"

namespace prolate {

enum class Regime { full, limited, multifreq };

std::string to_string(Regime r);
Regime parse_regime(const std::string& name);

struct ProblemSetup {
  ContrastField contrast;
  Regime regime = Regime::full;
  double k = 1.0;              // wavenumber, or K for the multi-frequency regime
  double theta = kPi;          // limited aperture half-angle
  Point2 x_star{1.0, 0.0};     // multi-frequency observation direction
  double c = 0.0;              // 0 selects the full-aperture default

  /// c actually used: the stored value, or 2k * 1.1 * circumradius for full data.
  double bandwidth() const;
  /// Dilation h of the data domain: c/2k, c/k or c/K.
  double scale() const;
  Geometry data_domain() const;
  /// Factor mapping theta_hat - x_hat to the data-domain variable p.
  double p_scale() const;
};

struct SetupReport {
  bool ok = true;
  double margin = 0.0;               // smallest signed distance of a support sample to the domain boundary
  std::size_t samples = 0;
  std::vector<Point2> offending;
  std::vector<std::string> messages;
};

/// Checks parameters and samples the support (boundary plus at least 1000
/// interior points) against the data-domain membership oracle.
SetupReport validate_setup(const ProblemSetup& setup);

/// 4k^2/c, k^2/c or K^2/c.
double effective_kernel_scale(const ProblemSetup& setup);

}  // namespace prolate
