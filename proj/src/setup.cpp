#include "prolate/setup.hpp"

#include <algorithm>
#include <cmath>

#include "prolate/errors.hpp"

namespace prolate {

namespace {

void check_parameters(const ProblemSetup& s) {
  if (!(s.k > 0.0) || !std::isfinite(s.k)) throw ParameterError("setup: k must be > 0");
  if (!(s.c >= 0.0) || !std::isfinite(s.c)) throw ParameterError("setup: c must be >= 0");
  if (s.regime != Regime::full && s.c == 0.0) throw ParameterError("setup: c is required for limited and multifreq data");
  if (s.regime == Regime::limited && !(s.theta > 0.0 && s.theta <= kPi)) {
    throw ParameterError("setup: theta must lie in (0, pi]");
  }
  if (s.regime == Regime::multifreq && std::abs(norm(s.x_star) - 1.0) > 1e-12) {
    throw ParameterError("setup: x_star must be a unit vector");
  }
}

// Support sample points: boundary curves plus a lattice of the interior.
std::vector<Point2> support_samples(const ContrastField& q) {
  auto pts = q.boundary_samples(1024);
  for (const auto& s : q.shapes) {
    const int rings = 24;
    const int angles = 48;
    for (int i = 0; i < rings; ++i) {
      const double t = (i + 0.5) / rings;
      const double r = s.kind == Shape::Kind::disk ? s.radius * std::sqrt(t)
                                                   : std::sqrt(s.inner * s.inner + t * (s.radius * s.radius - s.inner * s.inner));
      for (int j = 0; j < angles; ++j) {
        const double a = 2.0 * kPi * (j + 0.5 * (i % 2)) / angles;
        pts.push_back({s.center.x + r * std::cos(a), s.center.y + r * std::sin(a)});
      }
    }
    pts.push_back(s.center);
  }
  if (q.grid) {
    const auto& g = *q.grid;
    const int sub = 4;
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int ix = 0; ix < g.nx; ++ix) {
        if (g.values[static_cast<std::size_t>(iy) * g.nx + ix] == 0.0) continue;
        for (int b = 0; b <= sub; ++b) {
          for (int a = 0; a <= sub; ++a) {
            pts.push_back({g.origin.x + (ix + static_cast<double>(a) / sub) * g.dx,
                           g.origin.y + (iy + static_cast<double>(b) / sub) * g.dy});
          }
        }
      }
    }
  }
  if (q.custom) {
    for (const auto& p : q.quad.nodes) pts.push_back(p);
  }
  return pts;
}

// Signed distance to the boundary of the data domain, estimated along 16
// directions by marching and bisection. Positive inside.
double signed_distance(const Geometry& g, Point2 p) {
  if (g.kind == GeometryKind::disk) return g.h * g.radius - norm(p);
  const bool inside = contains(g, p);
  const double reach = 4.0 * g.h;
  const double step = 0.02 * g.h;
  double best = reach;
  for (int d = 0; d < 16; ++d) {
    const Point2 dir{std::cos(2.0 * kPi * d / 16.0), std::sin(2.0 * kPi * d / 16.0)};
    double lo = 0.0;
    double hi = -1.0;
    for (double t = step; t <= reach && t < best; t += step) {
      if (contains(g, p + t * dir) != inside) {
        hi = t;
        break;
      }
      lo = t;
    }
    if (hi < 0.0) continue;
    for (int it = 0; it < 30; ++it) {
      const double mid = 0.5 * (lo + hi);
      (contains(g, p + mid * dir) == inside ? lo : hi) = mid;
    }
    best = std::min(best, hi);
  }
  return inside ? best : -best;
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::full: return "full";
    case Regime::limited: return "limited";
    case Regime::multifreq: return "multifreq";
  }
  return "full";
}

Regime parse_regime(const std::string& name) {
  if (name == "full") return Regime::full;
  if (name == "limited") return Regime::limited;
  if (name == "multifreq") return Regime::multifreq;
  throw ParameterError("unknown regime '" + name + "' (full, limited, multifreq)");
}

double ProblemSetup::bandwidth() const {
  if (c > 0.0) return c;
  if (regime != Regime::full) throw ParameterError("setup: c is required for limited and multifreq data");
  const double r = contrast.circumradius();
  if (!(r > 0.0)) throw ParameterError("setup: contrast has no support");
  return 2.0 * k * 1.1 * r;
}

double ProblemSetup::scale() const {
  const double cc = bandwidth();
  return regime == Regime::full ? cc / (2.0 * k) : cc / k;
}

Geometry ProblemSetup::data_domain() const {
  const double h = scale();
  switch (regime) {
    case Regime::full: return Geometry::disk(1.0, h);
    case Regime::limited: return Geometry::limited_aperture(theta, h);
    case Regime::multifreq: return Geometry::multi_freq(x_star, h);
  }
  return Geometry::disk(1.0, h);
}

double ProblemSetup::p_scale() const { return regime == Regime::full ? 0.5 * scale() : scale(); }

double effective_kernel_scale(const ProblemSetup& setup) {
  check_parameters(setup);
  const double cc = setup.bandwidth();
  const double k2 = setup.k * setup.k;
  return setup.regime == Regime::full ? 4.0 * k2 / cc : k2 / cc;
}

SetupReport validate_setup(const ProblemSetup& setup) {
  check_parameters(setup);
  SetupReport rep;
  const Geometry g = setup.data_domain();
  const auto pts = support_samples(setup.contrast);
  rep.samples = pts.size();
  if (pts.empty()) {
    rep.ok = false;
    rep.messages.push_back("contrast has no support samples");
    return rep;
  }
  rep.margin = INFINITY;
  for (const auto& p : pts) {
    const bool in = contains(g, p);
    rep.margin = std::min(rep.margin, signed_distance(g, p));
    if (!in) rep.offending.push_back(p);
  }
  if (!rep.offending.empty()) {
    rep.ok = false;
    rep.messages.push_back(std::to_string(rep.offending.size()) + " support samples lie outside the " + g.name() +
                           " data domain");
  }
  return rep;
}

}  // namespace prolate
