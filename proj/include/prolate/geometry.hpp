#pragma once

// Data-domain geometries (disk, limited-aperture set L, multi-frequency set
// M), their membership oracles and quadrature rules.

#include <string>

#include "prolate/numerics.hpp"

namespace prolate {

enum class GeometryKind { disk, limited_aperture, multi_freq };

struct Geometry {
  GeometryKind kind = GeometryKind::disk;
  double radius = 1.0;        // disk
  double theta = kPi;         // limited aperture half-angle, in (0, pi]
  Point2 x_star{1.0, 0.0};    // multi-frequency direction, unit
  double h = 1.0;             // dilation: the set is h * A

  static Geometry disk(double radius, double h = 1.0);
  static Geometry limited_aperture(double theta, double h = 1.0);
  static Geometry multi_freq(Point2 x_star, double h = 1.0);

  std::string name() const;   // "disk", "L", "M"
  // Half-widths of the axis-aligned bounding box centred at the origin.
  Point2 half_box() const;
  // Exact area of h * A where a closed form is available (disk, M); for L
  // the value is estimated from a fine membership grid.
  double area() const;
};

/// True iff p / h lies in the open set A.
bool contains(const Geometry& g, Point2 p);

enum class QuadScheme {
  automatic,         // polar Gauss for disk and M, refined midpoint for L
  midpoint,          // cell centres of a tensor grid, weight = cell area
  midpoint_refined,  // boundary cells weighted by their covered fraction
  polar_gauss,       // disk and M only
};

QuadScheme parse_quad_scheme(const std::string& name);
std::string to_string(QuadScheme scheme);

/// Rule on h * A. `resolution` is the number of cells per box side for the
/// midpoint schemes; polar rules use ceil(resolution / 8) radial nodes and
/// 2 ceil(resolution / 6) angles per disk. The result is paired under p -> -p.
QuadratureRule build_quadrature(const Geometry& g, int resolution, QuadScheme scheme = QuadScheme::automatic);

}  // namespace prolate
