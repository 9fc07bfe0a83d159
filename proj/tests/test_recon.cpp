#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "prolate/disk_basis.hpp"
#include "prolate/errors.hpp"
#include "prolate/forward.hpp"
#include "prolate/geometry.hpp"
#include "prolate/recon.hpp"
#include "prolate/symset_basis.hpp"

using namespace prolate;

namespace {

const ScaledDiskBasis& disk_fixture() {
  static const ScaledDiskBasis sb = scale_to_data_domain(compute_disk_basis(5.0, 4, 4), 2.0);
  return sb;
}

double l2(const QuadratureRule& q, const std::vector<cplx>& v) {
  double s = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) s += q.weights[j] * std::norm(v[j]);
  return std::sqrt(s);
}

double mode_norm(const ScaledDiskBasis& sb, std::size_t i) {
  double s = 0.0;
  for (std::size_t j = 0; j < sb.quad.size(); ++j) s += sb.quad.weights[j] * sb.node_value(i, j) * sb.node_value(i, j);
  return std::sqrt(s);
}

DataGrid grid_on(const QuadratureRule& q) {
  DataGrid d;
  d.quad = q;
  d.values.assign(q.size(), cplx(0.0, 0.0));
  d.missing.assign(q.size(), 0);
  return d;
}

}  // namespace

TEST_CASE("single-mode data gives a unit coefficient") {
  const auto& sb = disk_fixture();
  for (std::size_t i0 : {std::size_t{0}, std::size_t{4}, std::size_t{11}}) {
    auto d = grid_on(sb.quad);
    const double nrm = mode_norm(sb, i0);
    for (std::size_t j = 0; j < d.size(); ++j) d.values[j] = sb.eigenvalue(i0) * sb.node_value(i0, j) / nrm;
    const auto c = picard_coefficients(d, sb);
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(std::abs(c[i] - (i == i0 ? 1.0 : 0.0)) < 1e-8);
    }
  }
  const auto zero = picard_coefficients(grid_on(sb.quad), sb);
  for (auto c : zero) CHECK(c == cplx(0.0, 0.0));
}

TEST_CASE("synthesize then resum reproduces a band-limited contrast") {
  const auto& sb = disk_fixture();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::pair<std::size_t, double>> combo;
  for (std::size_t i = 0; i < 10; ++i) combo.emplace_back(i * 2 + (i % 3), u(rng));
  auto q = [&](Point2 x) {
    double s = 0.0;
    for (auto [i, b] : combo) s += b * eval_scaled_psi(sb, i, x) / mode_norm(sb, i);
    return s;
  };
  // Finer, independent rule for the forward integral.
  const auto contrast = contrast_from_function(q, polar_gauss_disk(sb.radius, 60, 140), sb.radius);
  const auto data = synthesize_born(contrast, sb.kernel_scale(), sb.quad);
  const auto rec = reconstruct_full(data, sb, 1e-9);
  CHECK(rec.mode_count() == sb.size());
  std::vector<cplx> diff(sb.quad.size());
  std::vector<cplx> ref(sb.quad.size());
  for (std::size_t j = 0; j < diff.size(); ++j) {
    ref[j] = q(sb.quad.nodes[j]);
    diff[j] = rec.node_values[j] - ref[j];
  }
  CHECK(l2(sb.quad, diff) / l2(sb.quad, ref) < 1e-6);
  CHECK(rec.residual < 1e-8);
  CHECK(std::abs(rec.field(Point2{0.3, -0.2}) - q({0.3, -0.2})) < 1e-6);
  CHECK(rec.field(Point2{2.0 * sb.radius, 0.0}) == cplx(0.0, 0.0));

  const auto real = reconstruct_full(data, sb, 1e-9, true);
  CHECK(real.realified);
  CHECK(real.dropped_imaginary < 1e-8);
}

TEST_CASE("beta and the cutoff set") {
  const auto& sb = disk_fixture();
  const double chi00 = sb.base.modes[0].chi;
  const double just_below = (1.0 - 1e-12) / chi00;
  CHECK(beta_of_alpha(sb, just_below) == std::abs(sb.eigenvalue(0)));
  CHECK(cutoff_set_full(sb, just_below).size() == 1);
  CHECK_THROWS_AS(beta_of_alpha(sb, std::nextafter(1.0 / chi00, 1.0)), EmptyCutoffError);
  CHECK_THROWS_AS(reconstruct_full(grid_on(sb.quad), sb, 2.0 / chi00), EmptyCutoffError);

  double prev_beta = INFINITY;
  std::size_t prev_count = 0;
  for (int i = 0; i < 20; ++i) {
    const double a = 0.9 / chi00 * std::pow(1e-3, i / 19.0);
    const double b = beta_of_alpha(sb, a);
    const auto n = cutoff_set_full(sb, a).size();
    CHECK(b <= prev_beta);
    CHECK(n >= prev_count);
    prev_beta = b;
    prev_count = n;
  }
}

TEST_CASE("pure noise is amplified at most by 1/beta") {
  const auto& sb = disk_fixture();
  auto d = grid_on(sb.quad);
  d.values.assign(d.size(), cplx(1.0, 0.0));
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto noise = add_noise_absolute(grid_on(sb.quad), 1e-3, seed);
    for (double a : {1e-2, 1e-3, 1e-4}) {
      const auto r = reconstruct_full(noise, sb, a);
      CHECK(l2(sb.quad, r.node_values) <= 1e-3 / r.beta_alpha * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("coefficients ignore orthogonal components and are linear") {
  const auto& sb = disk_fixture();
  auto a = grid_on(sb.quad);
  auto b = grid_on(sb.quad);
  for (std::size_t j = 0; j < a.size(); ++j) {
    const Point2 p = sb.quad.nodes[j];
    a.values[j] = cplx(std::exp(-dot(p, p)), 0.3 * p.x);
    b.values[j] = sb.node_value(5, j) * cplx(0.0, 2.0);
  }
  auto ab = a;
  for (std::size_t j = 0; j < a.size(); ++j) ab.values[j] += b.values[j];
  const auto ca = picard_coefficients(a, sb);
  const auto cb = picard_coefficients(b, sb);
  const auto cab = picard_coefficients(ab, sb);
  CHECK(std::abs(cab[3] - ca[3]) < 1e-8 * (1.0 + std::abs(ca[3])));
  for (std::size_t i = 0; i < ca.size(); ++i) {
    CHECK(std::abs(cab[i] - ca[i] - cb[i]) < 1e-9 * (1.0 + std::abs(cab[i])));
  }
}

TEST_CASE("node mismatch and missing coverage are refused") {
  const auto& sb = disk_fixture();
  auto d = grid_on(sb.quad);
  d.quad.nodes[3].x = std::nextafter(d.quad.nodes[3].x, 1.0);
  CHECK_THROWS_AS(picard_coefficients(d, sb), ParameterError);
  auto m = grid_on(sb.quad);
  for (std::size_t j = 0; j < m.size() / 4; ++j) m.missing[j] = 1;
  CHECK_THROWS_AS(picard_coefficients(m, sb), ComputationError);
}

TEST_CASE("partial reconstruction on a disk agrees with the full one") {
  const double c = 5.0;
  const auto& sb = disk_fixture();
  const auto g = Geometry::disk(1.0, sb.radius);
  const auto quad = build_quadrature(g, 240, QuadScheme::polar_gauss);
  const auto ss = compute_symset_basis(c, g, quad, 40);
  auto q = [&](Point2 x) {
    return eval_scaled_psi(sb, 0, x) / mode_norm(sb, 0) - 0.5 * eval_scaled_psi(sb, 3, x) / mode_norm(sb, 3);
  };
  const auto contrast = contrast_from_function(q, polar_gauss_disk(sb.radius, 50, 120), sb.radius);
  const auto full = reconstruct_full(synthesize_born(contrast, sb.kernel_scale(), sb.quad), sb, 1e-9);
  const auto part = reconstruct_partial(synthesize_born(contrast, ss.kernel_scale(), ss.quad), ss,
                                        1e-6 * std::abs(ss.eigenvalue(0)));
  for (Point2 p : {Point2{0.1, 0.2}, Point2{-0.6, 0.3}, Point2{0.0, -1.0}}) {
    CHECK(std::abs(full.field(p) - part.field(p)) < 1e-4);
  }
}

TEST_CASE("partial cutoff, single mode and source-condition bound") {
  const double c = 5.0;
  const auto g = Geometry::limited_aperture(3.0 * kPi / 4.0, 0.8);
  const auto quad = build_quadrature(g, 40);
  const auto ss = compute_symset_basis(c, g, quad, 60);
  const std::size_t n = quad.size();
  std::vector<double> norms(ss.size());
  for (std::size_t i = 0; i < ss.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += quad.weights[j] * ss.node_value(i, j) * ss.node_value(i, j);
    norms[i] = std::sqrt(s);
  }

  auto single = grid_on(quad);
  for (std::size_t j = 0; j < n; ++j) single.values[j] = ss.eigenvalue(2) * ss.node_value(2, j) / norms[2];
  const auto r1 = reconstruct_partial(single, ss, 0.5 * std::abs(ss.eigenvalue(2)));
  for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(r1.node_values[j] - ss.node_value(2, j) / norms[2]) < 1e-10);
  CHECK_THROWS_AS(reconstruct_partial(single, ss, 2.0 * std::abs(ss.eigenvalue(0))), EmptyCutoffError);

  // q = sum |mu| a_n phi_n with ||a|| = E, exact data K q plus noise of norm delta.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> a(ss.size());
  double e2 = 0.0;
  for (auto& x : a) {
    x = u(rng);
    e2 += x * x;
  }
  const double E = std::sqrt(e2);
  auto data = grid_on(quad);
  std::vector<cplx> qv(n, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const cplx mu = ss.eigenvalue(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double phi = ss.node_value(i, j) / norms[i];
      qv[j] += std::abs(mu) * a[i] * phi;
      data.values[j] += mu * std::abs(mu) * a[i] * phi;
    }
  }
  for (double ratio : {1e-2, 1e-3}) {
    const double delta = ratio * E;
    const auto noisy = add_noise_absolute(data, delta, 5);
    const double alpha = choose_alpha_partial(delta, E, 1.0, 1.0);
    const auto r = reconstruct_partial(noisy, ss, alpha);
    std::vector<cplx> diff(n);
    for (std::size_t j = 0; j < n; ++j) diff[j] = r.node_values[j] - qv[j];
    CHECK(l2(quad, diff) <= std::sqrt(delta * E) * 2.0);
  }
}

TEST_CASE("a-priori parameter choice") {
  CHECK(choose_alpha_partial(0.3, 0.3, 1.0, 2.5) == doctest::Approx(2.5));
  CHECK(choose_alpha_partial(0.04, 1.0, 1.0, 1.0) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(choose_alpha_partial(1e-3, 1.0, 1.0, 1.0) < choose_alpha_partial(2e-3, 1.0, 1.0, 1.0));
  CHECK_THROWS_AS(choose_alpha_partial(0.0, 1.0, 1.0, 1.0), ParameterError);
}
