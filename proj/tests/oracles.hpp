#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "prolate/disk_basis.hpp"
#include "prolate/numerics.hpp"

namespace oracle {

using prolate::cplx;
using prolate::Point2;

// Polar Gauss rule on B(0,1) built here rather than through the library.
struct Rule {
  std::vector<Point2> nodes;
  std::vector<double> weights;
};

inline Rule unit_disk_rule(int n_r, int n_theta) {
  Rule rule;
  const auto g = prolate::gauss_legendre(n_r);
  for (int j = 0; j < n_theta; ++j) {
    const double t = 2.0 * prolate::kPi * (j + 0.25) / n_theta;
    for (int i = 0; i < n_r; ++i) {
      const double r = 0.5 * (g.nodes[i] + 1.0);
      rule.nodes.push_back({r * std::cos(t), r * std::sin(t)});
      rule.weights.push_back(0.5 * g.weights[i] * r * 2.0 * prolate::kPi / n_theta);
    }
  }
  return rule;
}

// int_{B(0,1)} exp(i c x.p) psi(p) dp by brute-force quadrature.
inline cplx extension_integral(const prolate::DiskBasis& b, std::size_t mode, Point2 x, const Rule& rule) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double phase = b.c * prolate::dot(x, rule.nodes[i]);
    s += rule.weights[i] * std::polar(1.0, phase) * prolate::eval_psi(b, mode, rule.nodes[i]);
  }
  return s;
}

// int_{R^2} psi^2 over the plane: radial Gauss panels to R and 2R with the
// 1/R tail removed by Richardson extrapolation.
inline double plane_energy(const prolate::DiskBasis& b, std::size_t mode, double outer = 300.0) {
  const auto& md = b.modes[mode];
  const double angular = md.id.m == 0 ? 2.0 * prolate::kPi : prolate::kPi;
  const Point2 axis_dir = md.id.ell == 1 ? Point2{1.0, 0.0}
                                         : Point2{std::cos(prolate::kPi / (2.0 * md.id.m)),
                                                  std::sin(prolate::kPi / (2.0 * md.id.m))};
  auto radial = [&](double r) { return prolate::eval_psi(b, mode, r * axis_dir); };
  const auto g = prolate::gauss_legendre(40);
  auto panel_sum = [&](double a, double c) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = 0.5 * (a + c) + 0.5 * (c - a) * g.nodes[i];
      const double v = radial(r);
      s += 0.5 * (c - a) * g.weights[i] * r * v * v;
    }
    return s;
  };
  auto integrate = [&](double to) {
    double s = panel_sum(0.0, 1.0);
    const double width = 1.0;
    for (double a = 1.0; a < to - 1e-12; a += width) s += panel_sum(a, std::min(a + width, to));
    return s;
  };
  const double e1 = integrate(outer);
  const double e2 = integrate(2.0 * outer);
  return angular * (2.0 * e2 - e1);
}

// |L(theta)| for L = {e^{ib} - e^{ia} : |a|, |b| < theta}. Writing
// p = 2 sin(d/2) i e^{i s} with d = b - a, s = (a + b)/2, the circle of
// radius r meets L in two arcs centred at +-pi/2 of half-width
// theta - asin(r/2), so |L| = int_0^2 r min(2 pi, 4 (theta - asin(r/2)))_+ dr.
inline double limited_aperture_area(double theta) {
  auto f = [theta](double r) {
    return r * std::clamp(4.0 * (theta - std::asin(0.5 * r)), 0.0, 2.0 * prolate::kPi);
  };
  // Kinks where the arcs start to overlap and where they vanish.
  std::vector<double> cuts{0.0, 2.0};
  for (double k : {theta - 0.5 * prolate::kPi, theta}) {
    if (k > 0.0 && k < 0.5 * prolate::kPi) cuts.push_back(2.0 * std::sin(k));
  }
  std::sort(cuts.begin(), cuts.end());
  const auto g = prolate::gauss_legendre(200);
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    for (std::size_t i = 0; i < g.size(); ++i) {
      s += 0.5 * (b - a) * g.weights[i] * f(0.5 * (a + b) + 0.5 * (b - a) * g.nodes[i]);
    }
  }
  return s;
}

}  // namespace oracle
