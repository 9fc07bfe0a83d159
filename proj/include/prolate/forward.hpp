#pragma once

// Born forward model: contrast descriptions, synthesis of
// u(p) = int exp(i kappa p.p') q(p') dp' on data nodes, far-field
// ingestion and calibrated noise.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prolate/numerics.hpp"

namespace prolate {

struct Shape {
  enum class Kind { disk, annulus };
  Kind kind = Kind::disk;
  Point2 center;
  double radius = 0.0;
  double inner = 0.0;  // annulus only
  double value = 1.0;
};

// Piecewise-constant values on an axis-aligned grid; values[iy * nx + ix]
// covers [origin.x + ix dx, +dx) x [origin.y + iy dy, +dy).
struct CellGrid {
  Point2 origin;
  double dx = 0.0;
  double dy = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;
};

struct ContrastField {
  std::vector<Shape> shapes;
  std::optional<CellGrid> grid;
  std::function<double(Point2)> custom;  // optional extra term
  double custom_radius = 0.0;            // support radius of `custom`

  // Rule over the support and q at its nodes. Overlapping shapes contribute
  // one rule each, so their values add.
  QuadratureRule quad;
  std::vector<double> node_values;

  double eval(Point2 x) const;
  // Largest |x| over the support.
  double circumradius() const;
  // Points on the boundary of every support piece (count per piece).
  std::vector<Point2> boundary_samples(int count) const;
  // Quadrature nodes with nonzero weight, thinned to at most `count`.
  std::vector<Point2> interior_samples(int count) const;
};

/// Attach a quadrature to a shape/grid description. `resolution` follows the
/// build_quadrature convention; `max_frequency` (kappa * max|p| over the data
/// domain) raises node counts so the phase is resolved.
void build_contrast_quadrature(ContrastField& field, int resolution, double max_frequency);

/// Field given by an oracle on an explicit rule.
ContrastField contrast_from_function(std::function<double(Point2)> q, const QuadratureRule& rule, double radius);

struct DataGrid {
  QuadratureRule quad;
  std::vector<cplx> values;
  std::vector<std::uint8_t> missing;  // 1 = node not covered by data
  double kappa = 0.0;
  double delta = 0.0;       // absolute noise norm ||n||
  double delta_rel = 0.0;   // ||n|| / ||u||
  std::optional<std::uint64_t> seed;
  std::string geometry = "disk";
  std::string noise_model = "none";
  bool under_resolved = false;

  std::size_t size() const { return values.size(); }
  double missing_weight_fraction() const;
  double norm() const;  // weighted L2 over non-missing nodes
};

/// u(p_j) = sum_q w_q q_q exp(i kappa p_j . y_q) for every target node.
DataGrid synthesize_born(const ContrastField& q, double kappa, const QuadratureRule& targets);

/// k^2 int exp(-i k xhat.y) q(y) exp(i k y.thetahat) dy.
cplx far_field(const ContrastField& q, Point2 x_hat, Point2 theta_hat, double k);

struct FarFieldSample {
  Point2 x_hat;
  Point2 theta_hat;
  cplx value;
};

/// Map samples to t = theta_hat - x_hat with value / k^2 and place them at
/// p = p_scale * t; interpolate onto the target nodes by inverse-distance
/// weighting of the 4 nearest distinct points. Nodes farther than `cutoff`
/// from every point are flagged missing (cutoff <= 0: three times the median
/// nearest-neighbour spacing of the samples).
DataGrid ingest_farfield(const std::vector<FarFieldSample>& samples, double k, const QuadratureRule& targets,
                         double p_scale = 1.0, double cutoff = 0.0);

/// Complex Gaussian perturbation scaled to ||n|| = delta_rel * ||u||.
DataGrid add_noise(const DataGrid& data, double delta_rel, std::uint64_t seed);

/// Complex Gaussian perturbation scaled to ||n|| = delta_abs.
DataGrid add_noise_absolute(const DataGrid& data, double delta_abs, std::uint64_t seed);

}  // namespace prolate
