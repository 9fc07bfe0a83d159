#include "prolate/geometry.hpp"

#include <cmath>
#include <vector>

#include "prolate/disk_basis.hpp"
#include "prolate/errors.hpp"

namespace prolate {

Geometry Geometry::disk(double radius, double h) {
  if (!(radius > 0.0) || !(h > 0.0)) throw ParameterError("disk geometry: radius and h must be > 0");
  Geometry g;
  g.kind = GeometryKind::disk;
  g.radius = radius;
  g.h = h;
  return g;
}

Geometry Geometry::limited_aperture(double theta, double h) {
  if (!(theta > 0.0) || theta > kPi) throw ParameterError("limited aperture: theta must lie in (0, pi]");
  if (!(h > 0.0)) throw ParameterError("limited aperture: h must be > 0");
  Geometry g;
  g.kind = GeometryKind::limited_aperture;
  g.theta = theta;
  g.h = h;
  return g;
}

Geometry Geometry::multi_freq(Point2 x_star, double h) {
  if (std::abs(norm(x_star) - 1.0) > 1e-12) throw ParameterError("multi-frequency: x_star must be a unit vector");
  if (!(h > 0.0)) throw ParameterError("multi-frequency: h must be > 0");
  Geometry g;
  g.kind = GeometryKind::multi_freq;
  g.x_star = x_star;
  g.h = h;
  return g;
}

std::string Geometry::name() const {
  switch (kind) {
    case GeometryKind::disk: return "disk";
    case GeometryKind::limited_aperture: return "L";
    case GeometryKind::multi_freq: return "M";
  }
  return "disk";
}

Point2 Geometry::half_box() const {
  switch (kind) {
    case GeometryKind::disk: return {h * radius, h * radius};
    case GeometryKind::limited_aperture: return {2.0 * h, 2.0 * h};
    case GeometryKind::multi_freq:
      return {h * (std::abs(x_star.x) + 1.0), h * (std::abs(x_star.y) + 1.0)};
  }
  return {h, h};
}

double Geometry::area() const {
  switch (kind) {
    case GeometryKind::disk: return kPi * radius * radius * h * h;
    case GeometryKind::multi_freq: return 2.0 * kPi * h * h;
    case GeometryKind::limited_aperture:
      if (theta == kPi) return 4.0 * kPi * h * h;
      return build_quadrature(*this, 1600, QuadScheme::midpoint_refined).measure();
  }
  return 0.0;
}

namespace {

bool in_aperture(Point2 u, double theta) { return std::abs(std::atan2(u.y, u.x)) < theta; }

bool contains_limited(Point2 q, double theta) {
  const double rho = norm(q);
  if (rho >= 2.0) return false;
  // At the origin the set of differences contains a full neighbourhood only
  // when the chord directions of the arc cover every angle.
  if (rho == 0.0) return theta > 0.5 * kPi;
  const Point2 u{q.x / rho, q.y / rho};
  const Point2 v{-u.y, u.x};
  const double cs = -0.5 * rho;
  const double sn = std::sqrt(std::max(0.0, 1.0 - cs * cs));
  for (double sign : {1.0, -1.0}) {
    const Point2 x_hat{cs * u.x + sign * sn * v.x, cs * u.y + sign * sn * v.y};
    const Point2 theta_hat = x_hat + q;
    if (in_aperture(x_hat, theta) && in_aperture(theta_hat, theta)) return true;
  }
  return false;
}

}  // namespace

bool contains(const Geometry& g, Point2 p) {
  const Point2 q{p.x / g.h, p.y / g.h};
  switch (g.kind) {
    case GeometryKind::disk: return norm(q) < g.radius;
    case GeometryKind::multi_freq: return norm(q - g.x_star) < 1.0 || norm(q + g.x_star) < 1.0;
    case GeometryKind::limited_aperture: return contains_limited(q, g.theta);
  }
  return false;
}

QuadScheme parse_quad_scheme(const std::string& name) {
  if (name == "auto" || name == "automatic") return QuadScheme::automatic;
  if (name == "midpoint") return QuadScheme::midpoint;
  if (name == "midpoint_refined") return QuadScheme::midpoint_refined;
  if (name == "polar_gauss") return QuadScheme::polar_gauss;
  throw ParameterError("unknown quadrature scheme '" + name + "'");
}

std::string to_string(QuadScheme scheme) {
  switch (scheme) {
    case QuadScheme::automatic: return "auto";
    case QuadScheme::midpoint: return "midpoint";
    case QuadScheme::midpoint_refined: return "midpoint_refined";
    case QuadScheme::polar_gauss: return "polar_gauss";
  }
  return "auto";
}

namespace {

constexpr int kSubsamples = 16;

// Builds the upper half (y > 0) of a tensor-midpoint rule; the caller mirrors
// it. An even cell count per side keeps every centre off the axes, and the
// half-integer offsets make the mirrored centres exact negations.
void midpoint_half(const Geometry& g, int n, bool refine, QuadratureRule& rule) {
  const Point2 box = g.half_box();
  const double dx = 2.0 * box.x / n;
  const double dy = 2.0 * box.y / n;
  const double cell = dx * dy;
  for (int j = n / 2; j < n; ++j) {
    const double y = (j - 0.5 * (n - 1)) * dy;
    for (int i = 0; i < n; ++i) {
      const double x = (i - 0.5 * (n - 1)) * dx;
      const Point2 centre{x, y};
      const bool inside = contains(g, centre);
      if (!refine) {
        if (inside) {
          rule.nodes.push_back(centre);
          rule.weights.push_back(cell);
        }
        continue;
      }
      // Cheap test: all four corners agree with the centre.
      bool uniform = true;
      for (double sx : {-0.5, 0.5}) {
        for (double sy : {-0.5, 0.5}) {
          if (contains(g, {x + sx * dx, y + sy * dy}) != inside) uniform = false;
        }
      }
      if (uniform) {
        if (inside) {
          rule.nodes.push_back(centre);
          rule.weights.push_back(cell);
        }
        continue;
      }
      // Covered fraction from vertical sample lines: each line is scanned at
      // kSubsamples points and every inside/outside transition is located by
      // bisection, so the fraction error is set by the spacing of the lines
      // rather than by a point count.
      double covered = 0.0;
      double mx = 0.0;
      double my = 0.0;
      const double y0 = y - 0.5 * dy;
      for (int a = 0; a < kSubsamples; ++a) {
        const double sx = x + ((a + 0.5) / kSubsamples - 0.5) * dx;
        auto in = [&](double t) { return contains(g, {sx, t}); };
        const double step = dy / kSubsamples;
        double prev_t = y0;
        bool prev_in = in(y0);
        double run_start = prev_in ? y0 : 0.0;
        for (int b = 1; b <= kSubsamples; ++b) {
          const double t = y0 + b * step;
          const bool now = in(t);
          if (now != prev_in) {
            double lo = prev_t;
            double hi = t;
            for (int it = 0; it < 50; ++it) {
              const double mid = 0.5 * (lo + hi);
              if (in(mid) == prev_in) lo = mid; else hi = mid;
            }
            const double cross = 0.5 * (lo + hi);
            if (prev_in) {
              covered += cross - run_start;
              mx += sx * (cross - run_start);
              my += 0.5 * (cross * cross - run_start * run_start);
            } else {
              run_start = cross;
            }
          }
          prev_t = t;
          prev_in = now;
        }
        if (prev_in) {
          const double top = y0 + dy;
          covered += top - run_start;
          mx += sx * (top - run_start);
          my += 0.5 * (top * top - run_start * run_start);
        }
      }
      if (covered <= 0.0) continue;
      const double fraction = covered / (kSubsamples * dy);
      Point2 node{mx / covered, my / covered};
      if (!contains(g, node) || node.y <= 0.0) {
        // Non-convex piece: fall back to the nearest inside point on the
        // sample lattice.
        double best = INFINITY;
        Point2 pick = node;
        for (int b = 0; b < kSubsamples; ++b) {
          for (int a = 0; a < kSubsamples; ++a) {
            const Point2 s{x + ((a + 0.5) / kSubsamples - 0.5) * dx, y + ((b + 0.5) / kSubsamples - 0.5) * dy};
            if (s.y > 0.0 && contains(g, s) && norm(s - node) < best) {
              best = norm(s - node);
              pick = s;
            }
          }
        }
        if (!(best < INFINITY)) continue;
        node = pick;
      }
      rule.nodes.push_back(node);
      rule.weights.push_back(cell * fraction);
    }
  }
}

void mirror(QuadratureRule& rule) {
  const std::size_t half = rule.nodes.size();
  for (std::size_t i = 0; i < half; ++i) {
    rule.nodes.push_back(-rule.nodes[i]);
    rule.weights.push_back(rule.weights[i]);
  }
  rule.paired = true;
}

}  // namespace

QuadratureRule build_quadrature(const Geometry& g, int resolution, QuadScheme scheme) {
  if (resolution < 8) throw ParameterError("build_quadrature: resolution must be >= 8");
  if (scheme == QuadScheme::automatic) {
    scheme = g.kind == GeometryKind::limited_aperture ? QuadScheme::midpoint_refined : QuadScheme::polar_gauss;
  }
  QuadratureRule rule;
  if (scheme == QuadScheme::polar_gauss) {
    const int n_r = (resolution + 7) / 8;
    const int n_theta = 2 * ((resolution + 5) / 6);
    if (g.kind == GeometryKind::disk) return polar_gauss_disk(g.radius * g.h, n_r, n_theta);
    if (g.kind == GeometryKind::multi_freq) {
      // Two tangent disks; the second is the negation of the first.
      rule = polar_gauss_disk(g.h, n_r, n_theta, g.h * g.x_star);
      mirror(rule);
      return rule;
    }
    throw ParameterError("build_quadrature: polar_gauss is available for disk and M only");
  }
  const int n = resolution + (resolution % 2);
  midpoint_half(g, n, scheme == QuadScheme::midpoint_refined, rule);
  if (rule.nodes.empty()) throw ComputationError("build_quadrature: no nodes inside the set");
  mirror(rule);
  return rule;
}

}  // namespace prolate
