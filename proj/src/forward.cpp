#include "prolate/forward.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "prolate/disk_basis.hpp"
#include "prolate/errors.hpp"

namespace prolate {

namespace {

bool in_shape(const Shape& s, Point2 x) {
  const double r = norm(x - s.center);
  if (s.kind == Shape::Kind::disk) return r < s.radius;
  return r >= s.inner && r < s.radius;
}

void append(QuadratureRule& rule, std::vector<double>& values, Point2 node, double weight, double value) {
  rule.nodes.push_back(node);
  rule.weights.push_back(weight);
  values.push_back(value);
}

int even_at_least(double v) {
  int n = static_cast<int>(std::ceil(v));
  return n + (n % 2);
}

}  // namespace

double ContrastField::eval(Point2 x) const {
  double q = 0.0;
  for (const auto& s : shapes) {
    if (in_shape(s, x)) q += s.value;
  }
  if (grid) {
    const double fx = (x.x - grid->origin.x) / grid->dx;
    const double fy = (x.y - grid->origin.y) / grid->dy;
    if (fx >= 0.0 && fy >= 0.0 && fx < grid->nx && fy < grid->ny) {
      q += grid->values[static_cast<std::size_t>(fy) * grid->nx + static_cast<std::size_t>(fx)];
    }
  }
  if (custom) q += custom(x);
  return q;
}

double ContrastField::circumradius() const {
  double r = custom ? custom_radius : 0.0;
  for (const auto& s : shapes) r = std::max(r, norm(s.center) + s.radius);
  if (grid) {
    for (int i = 0; i <= 1; ++i) {
      for (int j = 0; j <= 1; ++j) {
        r = std::max(r, norm({grid->origin.x + i * grid->nx * grid->dx, grid->origin.y + j * grid->ny * grid->dy}));
      }
    }
  }
  return r;
}

std::vector<Point2> ContrastField::boundary_samples(int count) const {
  std::vector<Point2> out;
  auto circle = [&](Point2 c, double r) {
    for (int i = 0; i < count; ++i) {
      const double t = 2.0 * kPi * i / count;
      out.push_back({c.x + r * std::cos(t), c.y + r * std::sin(t)});
    }
  };
  for (const auto& s : shapes) {
    circle(s.center, s.radius);
    if (s.kind == Shape::Kind::annulus && s.inner > 0.0) circle(s.center, s.inner);
  }
  if (grid) {
    const double w = grid->nx * grid->dx;
    const double h = grid->ny * grid->dy;
    for (int i = 0; i < count; ++i) {
      const double t = static_cast<double>(i) / count;
      out.push_back({grid->origin.x + t * w, grid->origin.y});
      out.push_back({grid->origin.x + t * w, grid->origin.y + h});
      out.push_back({grid->origin.x, grid->origin.y + t * h});
      out.push_back({grid->origin.x + w, grid->origin.y + t * h});
    }
  }
  if (custom && custom_radius > 0.0) circle({0.0, 0.0}, custom_radius);
  return out;
}

std::vector<Point2> ContrastField::interior_samples(int count) const {
  std::vector<Point2> out;
  if (quad.size() == 0 || count <= 0) return out;
  const std::size_t stride = std::max<std::size_t>(1, quad.size() / static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < quad.size(); i += stride) out.push_back(quad.nodes[i]);
  return out;
}

void build_contrast_quadrature(ContrastField& field, int resolution, double max_frequency) {
  if (resolution < 8) throw ParameterError("contrast quadrature: resolution must be >= 8");
  if (!(max_frequency >= 0.0)) throw ParameterError("contrast quadrature: frequency must be >= 0");
  field.quad = {};
  field.node_values.clear();
  for (const auto& s : field.shapes) {
    if (!(s.radius > 0.0) || (s.kind == Shape::Kind::annulus && !(s.inner >= 0.0 && s.inner < s.radius))) {
      throw ParameterError("contrast shape: need radius > 0 and 0 <= inner < radius");
    }
    const double span = s.radius;
    const int n_r = std::max((resolution + 7) / 8, static_cast<int>(std::ceil(0.5 * max_frequency * span)) + 16);
    const int n_theta = std::max(2 * ((resolution + 5) / 6), even_at_least(max_frequency * span + 30.0));
    if (s.kind == Shape::Kind::disk) {
      const auto rule = polar_gauss_disk(s.radius, n_r, n_theta, s.center);
      for (std::size_t i = 0; i < rule.size(); ++i) append(field.quad, field.node_values, rule.nodes[i], rule.weights[i], s.value);
    } else {
      const auto g = gauss_legendre(n_r, s.inner, s.radius);
      const double dt = 2.0 * kPi / n_theta;
      for (int j = 0; j < n_theta; ++j) {
        const double t = (j + 0.5) * dt;
        for (std::size_t i = 0; i < g.size(); ++i) {
          const Point2 p{s.center.x + g.nodes[i] * std::cos(t), s.center.y + g.nodes[i] * std::sin(t)};
          append(field.quad, field.node_values, p, g.weights[i] * g.nodes[i] * dt, s.value);
        }
      }
    }
  }
  if (field.grid) {
    const auto& cg = *field.grid;
    if (cg.nx < 1 || cg.ny < 1 || !(cg.dx > 0.0) || !(cg.dy > 0.0) ||
        cg.values.size() != static_cast<std::size_t>(cg.nx) * cg.ny) {
      throw ParameterError("contrast grid: inconsistent dimensions");
    }
    const int order = std::max(2, static_cast<int>(std::ceil(0.5 * max_frequency * std::max(cg.dx, cg.dy))) + 4);
    const auto g = gauss_legendre(order);
    for (int iy = 0; iy < cg.ny; ++iy) {
      for (int ix = 0; ix < cg.nx; ++ix) {
        const double v = cg.values[static_cast<std::size_t>(iy) * cg.nx + ix];
        if (v == 0.0) continue;
        const double x0 = cg.origin.x + ix * cg.dx;
        const double y0 = cg.origin.y + iy * cg.dy;
        for (int b = 0; b < order; ++b) {
          for (int a = 0; a < order; ++a) {
            const Point2 p{x0 + 0.5 * cg.dx * (g.nodes[a] + 1.0), y0 + 0.5 * cg.dy * (g.nodes[b] + 1.0)};
            append(field.quad, field.node_values, p, 0.25 * cg.dx * cg.dy * g.weights[a] * g.weights[b], v);
          }
        }
      }
    }
  }
  if (field.quad.size() == 0) throw ParameterError("contrast: empty support");
}

ContrastField contrast_from_function(std::function<double(Point2)> q, const QuadratureRule& rule, double radius) {
  ContrastField field;
  field.custom = std::move(q);
  field.custom_radius = radius;
  field.quad = rule;
  field.node_values.reserve(rule.size());
  for (const auto& p : rule.nodes) field.node_values.push_back(field.custom(p));
  return field;
}

double DataGrid::missing_weight_fraction() const {
  double total = 0.0;
  double miss = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    total += quad.weights[i];
    if (!missing.empty() && missing[i]) miss += quad.weights[i];
  }
  return total > 0.0 ? miss / total : 0.0;
}

double DataGrid::norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!missing.empty() && missing[i]) continue;
    s += quad.weights[i] * std::norm(values[i]);
  }
  return std::sqrt(s);
}

DataGrid synthesize_born(const ContrastField& q, double kappa, const QuadratureRule& targets) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ParameterError("synthesize_born: kappa must be > 0");
  if (q.quad.size() != q.node_values.size()) throw ParameterError("synthesize_born: contrast has no quadrature");
  DataGrid out;
  out.quad = targets;
  out.kappa = kappa;
  out.values.assign(targets.size(), cplx(0.0, 0.0));
  out.missing.assign(targets.size(), 0);

  std::vector<double> aw(q.quad.size());
  for (std::size_t i = 0; i < aw.size(); ++i) aw[i] = q.quad.weights[i] * q.node_values[i];
  double pmax = 0.0;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const Point2 p = targets.nodes[j];
    pmax = std::max(pmax, prolate::norm(p));
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < aw.size(); ++i) {
      const double phase = kappa * dot(p, q.quad.nodes[i]);
      re += aw[i] * std::cos(phase);
      im += aw[i] * std::sin(phase);
    }
    out.values[j] = {re, im};
  }
  // At least 10 nodes per oscillation period along each direction.
  const double periods = kappa * pmax * 2.0 * q.circumradius() / (2.0 * kPi);
  out.under_resolved = periods > 0.0 && std::sqrt(static_cast<double>(q.quad.size())) < 10.0 * periods;
  return out;
}

cplx far_field(const ContrastField& q, Point2 x_hat, Point2 theta_hat, double k) {
  if (!(k > 0.0)) throw ParameterError("far_field: k must be > 0");
  const Point2 t = theta_hat - x_hat;
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < q.quad.size(); ++i) {
    const double a = q.quad.weights[i] * q.node_values[i];
    const double phase = k * dot(t, q.quad.nodes[i]);
    re += a * std::cos(phase);
    im += a * std::sin(phase);
  }
  return k * k * cplx(re, im);
}

namespace {

// Uniform bucket grid for k-nearest-neighbour queries.
class PointIndex {
 public:
  explicit PointIndex(const std::vector<Point2>& pts) : pts_(pts) {
    lo_ = pts.front();
    Point2 hi = pts.front();
    for (const auto& p : pts) {
      lo_.x = std::min(lo_.x, p.x);
      lo_.y = std::min(lo_.y, p.y);
      hi.x = std::max(hi.x, p.x);
      hi.y = std::max(hi.y, p.y);
    }
    const double w = std::max(hi.x - lo_.x, 1e-12);
    const double h = std::max(hi.y - lo_.y, 1e-12);
    cell_ = std::max(std::sqrt(w * h / static_cast<double>(pts.size())), 1e-12);
    nx_ = std::clamp(static_cast<int>(w / cell_) + 1, 1, 4096);
    ny_ = std::clamp(static_cast<int>(h / cell_) + 1, 1, 4096);
    cell_ = std::max(w / (nx_ - 0.5), h / (ny_ - 0.5));
    buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      auto [cx, cy] = cell_of(pts[i]);
      buckets_[static_cast<std::size_t>(cy) * nx_ + cx].push_back(static_cast<int>(i));
    }
  }

  // Up to k (distance, index) pairs sorted by distance, skipping `exclude`.
  std::vector<std::pair<double, int>> nearest(Point2 q, int k, int exclude = -1) const {
    std::vector<std::pair<double, int>> best;
    auto [cx, cy] = cell_of(q);
    const int max_ring = std::max(nx_, ny_);
    for (int ring = 0; ring <= max_ring; ++ring) {
      for (int dy = -ring; dy <= ring; ++dy) {
        for (int dx = -ring; dx <= ring; ++dx) {
          if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
          const int x = cx + dx;
          const int y = cy + dy;
          if (x < 0 || y < 0 || x >= nx_ || y >= ny_) continue;
          for (int i : buckets_[static_cast<std::size_t>(y) * nx_ + x]) {
            if (i == exclude) continue;
            const double d = norm(pts_[i] - q);
            if (static_cast<int>(best.size()) < k || d < best.back().first) {
              best.emplace_back(d, i);
              std::sort(best.begin(), best.end());
              if (static_cast<int>(best.size()) > k) best.pop_back();
            }
          }
        }
      }
      if (static_cast<int>(best.size()) == k && best.back().first <= ring * cell_) break;
    }
    return best;
  }

 private:
  std::pair<int, int> cell_of(Point2 p) const {
    const int x = std::clamp(static_cast<int>(std::floor((p.x - lo_.x) / cell_)), 0, nx_ - 1);
    const int y = std::clamp(static_cast<int>(std::floor((p.y - lo_.y) / cell_)), 0, ny_ - 1);
    return {x, y};
  }

  const std::vector<Point2>& pts_;
  Point2 lo_;
  double cell_ = 1.0;
  int nx_ = 1;
  int ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace

DataGrid ingest_farfield(const std::vector<FarFieldSample>& samples, double k, const QuadratureRule& targets,
                         double p_scale, double cutoff) {
  if (!(k > 0.0)) throw ParameterError("ingest_farfield: k must be > 0");
  if (!(p_scale > 0.0)) throw ParameterError("ingest_farfield: p_scale must be > 0");
  DataGrid out;
  out.quad = targets;
  out.values.assign(targets.size(), cplx(0.0, 0.0));
  out.missing.assign(targets.size(), 1);
  if (samples.empty()) return out;

  // Average duplicates on a 1e-12 lattice (ordered map keeps this deterministic).
  std::map<std::pair<long long, long long>, std::pair<cplx, int>> merged;
  std::map<std::pair<long long, long long>, Point2> where;
  const double k2 = k * k;
  for (const auto& s : samples) {
    const Point2 p = p_scale * (s.theta_hat - s.x_hat);
    const std::pair<long long, long long> key{std::llround(p.x * 1e12), std::llround(p.y * 1e12)};
    auto& slot = merged[key];
    slot.first += s.value / k2;
    slot.second += 1;
    where.emplace(key, p);
  }
  std::vector<Point2> pts;
  std::vector<cplx> vals;
  for (const auto& [key, acc] : merged) {
    pts.push_back(where.at(key));
    vals.push_back(acc.first / static_cast<double>(acc.second));
  }

  const PointIndex index(pts);
  if (!(cutoff > 0.0)) {
    std::vector<double> spacing;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto nn = index.nearest(pts[i], 1, static_cast<int>(i));
      if (!nn.empty()) spacing.push_back(nn.front().first);
    }
    if (spacing.empty()) {
      cutoff = 1e-12;
    } else {
      std::nth_element(spacing.begin(), spacing.begin() + spacing.size() / 2, spacing.end());
      cutoff = 3.0 * spacing[spacing.size() / 2];
    }
  }

  for (std::size_t j = 0; j < targets.size(); ++j) {
    const auto nn = index.nearest(targets.nodes[j], 4);
    if (nn.empty() || nn.front().first > cutoff) continue;
    out.missing[j] = 0;
    if (nn.front().first <= 1e-13 * (1.0 + prolate::norm(targets.nodes[j]))) {
      out.values[j] = vals[nn.front().second];
      continue;
    }
    cplx acc = 0.0;
    double wsum = 0.0;
    for (const auto& [d, i] : nn) {
      const double w = 1.0 / (d * d);
      acc += w * vals[i];
      wsum += w;
    }
    out.values[j] = acc / wsum;
  }
  return out;
}

namespace {

DataGrid perturb(const DataGrid& data, double target_norm, std::uint64_t seed) {
  DataGrid out = data;
  out.seed = seed;
  if (target_norm == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cplx> noise(data.size(), cplx(0.0, 0.0));
  double s = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    if (!data.missing.empty() && data.missing[i]) continue;
    noise[i] = {re, im};
    s += data.quad.weights[i] * std::norm(noise[i]);
  }
  if (s == 0.0) return out;
  const double scale = target_norm / std::sqrt(s);
  for (std::size_t i = 0; i < data.size(); ++i) out.values[i] += scale * noise[i];
  return out;
}

}  // namespace

DataGrid add_noise(const DataGrid& data, double delta_rel, std::uint64_t seed) {
  if (!(delta_rel >= 0.0)) throw ParameterError("add_noise: delta must be >= 0");
  const double u = data.norm();
  DataGrid out = perturb(data, delta_rel * u, seed);
  out.delta = delta_rel * u;
  out.delta_rel = delta_rel;
  out.noise_model = delta_rel > 0.0 ? "gaussian_relative" : "none";
  return out;
}

DataGrid add_noise_absolute(const DataGrid& data, double delta_abs, std::uint64_t seed) {
  if (!(delta_abs >= 0.0)) throw ParameterError("add_noise_absolute: delta must be >= 0");
  const double u = data.norm();
  DataGrid out = perturb(data, delta_abs, seed);
  out.delta = delta_abs;
  out.delta_rel = u > 0.0 ? delta_abs / u : 0.0;
  out.noise_model = delta_abs > 0.0 ? "gaussian_absolute" : "none";
  return out;
}

}  // namespace prolate
