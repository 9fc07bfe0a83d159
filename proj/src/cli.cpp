#include "prolate/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "prolate/analysis.hpp"
#include "prolate/errors.hpp"
#include "prolate/forward.hpp"
#include "prolate/io.hpp"
#include "prolate/recon.hpp"

namespace prolate::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

double l2(const QuadratureRule& q, const std::vector<cplx>& v) {
  double s = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) s += q.weights[j] * std::norm(v[j]);
  return std::sqrt(s);
}

std::vector<cplx> minus(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

// Contrast sampled on the data-domain rule, and its Born data on that rule.
struct Discretised {
  std::vector<cplx> q;
  DataGrid data;
};

Discretised discretise(const ProblemSetup& setup, const QuadratureRule& rule, double kappa) {
  auto contrast = std::make_shared<const ContrastField>(setup.contrast);
  const auto field = contrast_from_function([contrast](Point2 x) { return contrast->eval(x); }, rule,
                                            setup.contrast.circumradius());
  Discretised d;
  for (double v : field.node_values) d.q.emplace_back(v, 0.0);
  d.data = synthesize_born(field, kappa, rule);
  return d;
}

template <class Reconstruct, class Project>
std::vector<StabilityRow> sweep(const QuadratureRule& rule, const Discretised& disc, const std::vector<double>& deltas,
                                const std::vector<double>& alphas, int seeds, std::uint64_t seed,
                                Reconstruct reconstruct, Project project) {
  if (seeds < 1) throw ParameterError("experiment: seeds must be >= 1");
  std::vector<StabilityRow> rows;
  for (double delta : deltas) {
    if (!(delta >= 0.0)) throw ParameterError("experiment: deltas must be >= 0");
    for (double alpha : alphas) {
      StabilityRow row;
      row.delta = delta;
      row.alpha = alpha;
      row.projection_error = l2(rule, minus(project(disc.q, alpha), disc.q));
      double sum = 0.0;
      const int runs = delta > 0.0 ? seeds : 1;
      for (int s = 0; s < runs; ++s) {
        const DataGrid noisy = delta > 0.0 ? add_noise_absolute(disc.data, delta, seed + s) : disc.data;
        const auto rec = reconstruct(noisy, alpha);
        row.modes = rec.mode_count();
        row.beta = rec.beta_alpha;
        const double e = l2(rule, minus(rec.node_values, disc.q));
        sum += e;
        row.error_max = std::max(row.error_max, e);
      }
      row.error_mean = sum / runs;
      row.bound = delta / row.beta + row.projection_error;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace

QuadratureRule data_rule(const ProblemSetup& setup, const RuleOptions& options) {
  if (setup.regime == Regime::full) {
    if (options.m_max < 0 || options.n_max < 0) throw ParameterError("m_max and n_max must be >= 0");
    return data_domain_rule(setup.bandwidth(), options.m_max, options.n_max, setup.k);
  }
  return build_quadrature(setup.data_domain(), options.resolution, options.scheme);
}

std::vector<StabilityRow> experiment_stability(const ProblemSetup& setup, const ScaledDiskBasis& basis,
                                               const std::vector<double>& deltas, const std::vector<double>& alphas,
                                               int seeds, std::uint64_t seed) {
  if (setup.regime != Regime::full) throw ParameterError("experiment: a disk basis needs a full-aperture setup");
  if (std::abs(basis.base.c - setup.bandwidth()) > 1e-12 * setup.bandwidth() ||
      std::abs(basis.k - setup.k) > 1e-12 * setup.k) {
    throw ParameterError("experiment: basis c or k does not match the setup");
  }
  const auto disc = discretise(setup, basis.quad, basis.kernel_scale());
  return sweep(
      basis.quad, disc, deltas, alphas, seeds, seed,
      [&](const DataGrid& d, double a) { return reconstruct_full(d, basis, a); },
      [&](const std::vector<cplx>& q, double a) { return project_pi_alpha(basis, q, a); });
}

std::vector<StabilityRow> experiment_stability(const ProblemSetup& setup, const SymSetBasis& basis,
                                               const std::vector<double>& deltas, const std::vector<double>& alphas,
                                               int seeds, std::uint64_t seed) {
  const Geometry g = setup.data_domain();
  if (g.kind != basis.geometry.kind || std::abs(g.h - basis.geometry.h) > 1e-12 * g.h) {
    throw ParameterError("experiment: basis geometry does not match the setup");
  }
  const auto disc = discretise(setup, basis.quad, basis.kernel_scale());
  auto project = [&](const std::vector<cplx>& q, double a) {
    std::vector<cplx> out(q.size(), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (!(std::abs(basis.eigenvalue(i)) > a)) continue;
      double n2 = 0.0;
      cplx s = 0.0;
      for (std::size_t j = 0; j < q.size(); ++j) {
        const double v = basis.node_value(i, j);
        n2 += basis.quad.weights[j] * v * v;
        s += basis.quad.weights[j] * v * q[j];
      }
      for (std::size_t j = 0; j < q.size(); ++j) out[j] += s / n2 * basis.node_value(i, j);
    }
    return out;
  };
  return sweep(
      basis.quad, disc, deltas, alphas, seeds, seed,
      [&](const DataGrid& d, double a) { return reconstruct_partial(d, basis, a); }, project);
}

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParameterError(path + ": invalid JSON");
  return j;
}

std::ofstream open_out(const std::string& path) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ParameterError("cannot write " + path);
  return out;
}

std::string cache_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("PROLATE_CACHE_DIR"); env && *env) return env;
  return ".prolate-cache";
}

Point2 parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ParameterError("expected x,y but got '" + s + "'");
  return {io::parse_double(s.substr(0, comma)), io::parse_double(s.substr(comma + 1))};
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty()) out.push_back(io::parse_double(cell));
  }
  if (out.empty()) throw ParameterError("empty number list");
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    rows.push_back(std::move(f));
  }
  // Skip a header row of names.
  if (!rows.empty()) {
    try {
      io::parse_double(rows.front().front());
    } catch (const ParameterError&) {
      rows.erase(rows.begin());
    }
  }
  return rows;
}

// Options shared by commands that build the data-domain rule.
struct RuleFlags {
  int m_max = -1;
  int n_max = -1;
  int resolution = -1;
  std::string scheme;

  void add(CLI::App* app) {
    app->add_option("--m-max", m_max, "disk basis m_max defining the D_F rule (default 8)");
    app->add_option("--n-max", n_max, "disk basis n_max defining the D_F rule (default 8)");
    app->add_option("--resolution", resolution, "quadrature resolution on L or M (default 40)");
    app->add_option("--scheme", scheme, "quadrature scheme on L or M: auto, midpoint, midpoint_refined, polar_gauss");
  }

  RuleOptions resolve(const json& setup_json) const {
    RuleOptions o;
    if (setup_json.contains("basis")) {
      const auto& b = setup_json["basis"];
      o.m_max = b.value("m_max", o.m_max);
      o.n_max = b.value("n_max", o.n_max);
      o.resolution = b.value("resolution", o.resolution);
      if (b.contains("scheme")) o.scheme = parse_quad_scheme(b["scheme"].get<std::string>());
    }
    if (m_max >= 0) o.m_max = m_max;
    if (n_max >= 0) o.n_max = n_max;
    if (resolution >= 0) o.resolution = resolution;
    if (!scheme.empty()) o.scheme = parse_quad_scheme(scheme);
    return o;
  }
};

json setup_header(const ProblemSetup& s, const RuleOptions& o) {
  json h = {{"regime", to_string(s.regime)}, {"k", s.k},          {"c", s.bandwidth()},
            {"h", s.scale()},                {"p_scale", s.p_scale()}};
  if (s.regime == Regime::full) {
    h["m_max"] = o.m_max;
    h["n_max"] = o.n_max;
  } else {
    h["resolution"] = o.resolution;
    h["scheme"] = to_string(o.scheme);
    if (s.regime == Regime::limited) h["theta"] = s.theta;
    if (s.regime == Regime::multifreq) h["x_star"] = {s.x_star.x, s.x_star.y};
  }
  return h;
}

ProblemSetup load_setup(const std::string& path, json* raw, std::ostream& err) {
  json j = read_json_file(path);
  ProblemSetup s = io::parse_setup(j);
  const auto rep = validate_setup(s);
  if (!rep.ok) {
    std::ostringstream msg;
    msg << path << ": contrast support is not contained in the data domain (" << rep.offending.size() << " of "
        << rep.samples << " samples outside, margin " << rep.margin << ")";
    throw ParameterError(msg.str());
  }
  err << "setup ok: margin " << rep.margin << " over " << rep.samples << " support samples\n";
  if (raw) *raw = std::move(j);
  return s;
}

DataGrid load_data(const std::string& path, json* header) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  return io::read_datagrid(in, header);
}

void write_data(const std::string& path, const DataGrid& d, const json& extra) {
  auto out = open_out(path);
  io::write_datagrid(d, extra, out);
}

struct LoadedBasis {
  std::optional<DiskBasis> disk;
  std::optional<SymSetBasis> symset;
};

LoadedBasis load_basis(const std::string& path) {
  const json head = io::read_basis_header(path);
  LoadedBasis b;
  if (head.value("kind", "") == "disk") {
    b.disk = io::load_disk_basis(path);
  } else {
    b.symset = io::load_symset_basis(path);
  }
  if (!b.disk && !b.symset) throw ComputationError(path + ": basis cache failed its integrity check");
  return b;
}

int cmd_basis(const std::string& kind, double c, int m_max, int n_max, int truncation, const std::string& geometry,
              double theta, const std::string& x_star, double radius, double h, int resolution,
              const std::string& scheme, int modes, const std::string& dir, std::ostream& out, std::ostream& err) {
  const fs::path root = cache_dir(dir);
  if (kind == "disk") {
    if (!(c > 0.0)) throw ParameterError("--c must be > 0");
    if (m_max < 0 || n_max < 0) throw ParameterError("--m-max and --n-max must be >= 0");
    io::CacheKey key;
    key.kind = "disk";
    key.c = c;
    key.m_max = m_max;
    key.n_max = n_max;
    key.truncation = truncation > 0 ? truncation : default_truncation(c, n_max);
    const fs::path path = root / key.file_name();
    if (auto cached = io::load_disk_basis(path); cached && io::key_for(*cached).canonical() == key.canonical()) {
      err << "cache hit: " << path.string() << "\n";
    } else {
      err << "computing disk basis c=" << c << " m_max=" << m_max << " n_max=" << n_max << "\n";
      io::save_basis(compute_disk_basis(c, m_max, n_max, key.truncation), path);
    }
    out << path.string() << "\n";
    return 0;
  }
  if (kind != "symset") throw ParameterError("basis kind must be disk or symset");
  Geometry g;
  if (geometry == "disk") {
    g = Geometry::disk(radius, h);
  } else if (geometry == "L") {
    g = Geometry::limited_aperture(theta, h);
  } else if (geometry == "M") {
    g = Geometry::multi_freq(parse_point(x_star), h);
  } else {
    throw ParameterError("--geometry must be disk, L or M");
  }
  const QuadScheme sch = parse_quad_scheme(scheme);
  const auto quad = build_quadrature(g, resolution, sch);
  SymSetBasis probe;
  probe.c = c;
  probe.geometry = g;
  const auto key = io::key_for(probe, resolution, sch, modes);
  const fs::path path = root / key.file_name();
  if (auto cached = io::load_symset_basis(path);
      cached && io::read_basis_header(path).value("key", "") == key.canonical()) {
    err << "cache hit: " << path.string() << "\n";
  } else {
    if (!(c > 0.0)) throw ParameterError("--c must be > 0");
    err << "computing " << g.name() << " basis on " << quad.size() << " nodes\n";
    io::save_basis(compute_symset_basis(c, g, quad, modes), key, path);
  }
  out << path.string() << "\n";
  return 0;
}

json mode_entry(const std::optional<DiskBasis>& disk, const std::optional<SymSetBasis>& ss, std::size_t i, cplx v) {
  json id;
  if (disk) {
    const auto& m = disk->modes[i].id;
    id = {{"m", m.m}, {"n", m.n}, {"ell", m.ell}};
  } else {
    id = {{"index", i}, {"parity", ss->modes[i].parity == Parity::even ? "even" : "odd"}};
  }
  return {{"id", id}, {"coeff_re", v.real()}, {"coeff_im", v.imag()}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prolate-basis Born inversion toolkit", "prolate"};
  app.require_subcommand(1);

  // basis
  auto* basis = app.add_subcommand("basis", "compute and cache a disk or symmetric-set basis");
  std::string b_kind;
  double b_c = 0.0;
  int b_m = 8;
  int b_n = 8;
  int b_j = 0;
  std::string b_geom = "disk";
  double b_theta = kPi;
  std::string b_xstar = "1,0";
  double b_radius = 1.0;
  double b_h = 1.0;
  int b_res = 40;
  std::string b_scheme = "auto";
  int b_modes = 60;
  std::string b_dir;
  basis->add_option("kind", b_kind, "disk or symset")->required();
  basis->add_option("--c", b_c, "bandwidth parameter c")->required();
  basis->add_option("--m-max", b_m, "largest azimuthal order (disk)");
  basis->add_option("--n-max", b_n, "largest radial index (disk)");
  basis->add_option("--truncation", b_j, "disk-polynomial truncation, 0 = default");
  basis->add_option("--geometry", b_geom, "symset geometry: disk, L or M");
  basis->add_option("--theta", b_theta, "aperture half-angle for L");
  basis->add_option("--x-star", b_xstar, "direction x,y for M");
  basis->add_option("--radius", b_radius, "disk radius for the symset disk");
  basis->add_option("--scale", b_h, "dilation h of the set");
  basis->add_option("--resolution", b_res, "quadrature resolution");
  basis->add_option("--scheme", b_scheme, "quadrature scheme");
  basis->add_option("--modes", b_modes, "number of symset modes");
  basis->add_option("-o,--output", b_dir, "cache directory (default $PROLATE_CACHE_DIR or .prolate-cache)");

  // synthesize
  auto* synth = app.add_subcommand("synthesize", "setup file -> Born data file");
  std::string s_setup;
  std::string s_out;
  double s_noise = 0.0;
  double s_noise_abs = 0.0;
  std::uint64_t s_seed = 0;
  int s_cres = 64;
  RuleFlags s_rule;
  synth->add_option("setup", s_setup, "setup JSON")->required();
  synth->add_option("-o,--output", s_out, "output data file")->required();
  auto* noise_rel = synth->add_option("--noise", s_noise, "relative noise level delta = ||n|| / ||u||");
  synth->add_option("--noise-abs", s_noise_abs, "absolute noise level ||n||")->excludes(noise_rel);
  synth->add_option("--seed", s_seed, "noise seed");
  synth->add_option("--contrast-resolution", s_cres, "resolution of the contrast quadrature");
  s_rule.add(synth);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "far-field CSV -> data file");
  std::string i_csv;
  std::string i_setup;
  std::string i_out;
  double i_cutoff = 0.0;
  RuleFlags i_rule;
  ingest->add_option("farfield", i_csv, "CSV rows xhat_x,xhat_y,theta_x,theta_y,re,im or xhat_angle,theta_angle,re,im")
      ->required();
  ingest->add_option("--setup", i_setup, "setup JSON giving regime, k and c")->required();
  ingest->add_option("-o,--output", i_out, "output data file")->required();
  ingest->add_option("--cutoff", i_cutoff, "missing-node radius in p (default 3x median sample spacing)");
  i_rule.add(ingest);

  // reconstruct
  auto* recon = app.add_subcommand("reconstruct", "data file + basis -> result JSON");
  std::string r_data;
  std::string r_basis;
  std::string r_out;
  std::string r_field;
  double r_alpha = 0.0;
  std::vector<double> r_auto;
  bool r_realify = false;
  int r_grid = 64;
  recon->add_option("data", r_data, "data file")->required();
  recon->add_option("--basis", r_basis, "basis cache file")->required();
  auto* a_opt = recon->add_option("--alpha", r_alpha, "spectral cutoff parameter");
  auto* auto_opt = recon->add_option("--auto-alpha", r_auto, "delta E sigma c0: alpha = c0 (delta/E)^(1/(1+sigma))")
                       ->expected(4);
  a_opt->excludes(auto_opt);
  recon->add_option("-o,--output", r_out, "result JSON")->required();
  recon->add_option("--field-csv", r_field, "write x,y,q on a grid over the data domain");
  recon->add_option("--field-grid", r_grid, "points per side of the field grid");
  recon->add_flag("--realify", r_realify, "drop imaginary parts of the coefficients");

  // extrapolate
  auto* extra = app.add_subcommand("extrapolate", "band-limited extension of full-aperture data");
  std::string e_data;
  std::string e_basis;
  std::string e_targets;
  std::string e_out;
  double e_floor = 0.0;
  extra->add_option("data", e_data, "data file")->required();
  extra->add_option("--basis", e_basis, "disk basis cache file")->required();
  extra->add_option("--targets", e_targets, "CSV of x,y points")->required();
  extra->add_option("-o,--output", e_out, "output CSV x,y,re,im")->required();
  extra->add_option("--alpha-floor", e_floor, "drop modes with |alpha| below this fraction of the largest");

  // validate
  auto* valid = app.add_subcommand("validate", "self-checks of a cached basis");
  std::string v_basis;
  std::string v_out;
  std::string v_against;
  bool v_strict = false;
  valid->add_option("--basis", v_basis, "basis cache file")->required();
  valid->add_option("-o,--output", v_out, "report JSON (default stdout)");
  valid->add_option("--against", v_against, "disk basis file for a symset-on-disk cross-check");
  valid->add_flag("--strict", v_strict, "exit 1 when a check fails");

  // experiment
  auto* expt = app.add_subcommand("experiment", "stability table over noise levels and cutoffs");
  std::string x_setup;
  std::string x_basis;
  std::string x_out;
  std::string x_deltas = "0,1e-3,1e-2";
  std::string x_alphas;
  int x_seeds = 5;
  std::uint64_t x_seed = 0;
  expt->add_option("setup", x_setup, "setup JSON")->required();
  expt->add_option("--basis", x_basis, "basis cache file")->required();
  expt->add_option("--deltas", x_deltas, "comma-separated absolute noise levels");
  expt->add_option("--alphas", x_alphas, "comma-separated cutoff parameters")->required();
  expt->add_option("--seeds", x_seeds, "noise draws per point");
  expt->add_option("--seed", x_seed, "first seed");
  expt->add_option("-o,--output", x_out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*basis) {
      return cmd_basis(b_kind, b_c, b_m, b_n, b_j, b_geom, b_theta, b_xstar, b_radius, b_h, b_res, b_scheme, b_modes,
                       b_dir, out, err);
    }

    if (*synth) {
      json raw;
      const auto setup = load_setup(s_setup, &raw, err);
      const auto opts = s_rule.resolve(raw);
      const auto rule = data_rule(setup, opts);
      const double kappa = effective_kernel_scale(setup);
      ContrastField contrast = setup.contrast;
      double pmax = 0.0;
      for (const auto& p : rule.nodes) pmax = std::max(pmax, norm(p));
      build_contrast_quadrature(contrast, s_cres, kappa * pmax);
      DataGrid data = synthesize_born(contrast, kappa, rule);
      data.geometry = setup.data_domain().name();
      if (data.under_resolved) err << "warning: contrast quadrature may under-resolve the data oscillation\n";
      if (s_noise > 0.0) data = add_noise(data, s_noise, s_seed);
      if (s_noise_abs > 0.0) data = add_noise_absolute(data, s_noise_abs, s_seed);
      write_data(s_out, data, setup_header(setup, opts));
      return 0;
    }

    if (*ingest) {
      json raw;
      const auto setup = load_setup(i_setup, &raw, err);
      const auto opts = i_rule.resolve(raw);
      const auto rule = data_rule(setup, opts);
      std::vector<FarFieldSample> samples;
      for (const auto& f : read_csv(i_csv)) {
        FarFieldSample s;
        if (f.size() == 6) {
          s.x_hat = {io::parse_double(f[0]), io::parse_double(f[1])};
          s.theta_hat = {io::parse_double(f[2]), io::parse_double(f[3])};
          s.value = {io::parse_double(f[4]), io::parse_double(f[5])};
        } else if (f.size() == 4) {
          const double a = io::parse_double(f[0]);
          const double b = io::parse_double(f[1]);
          s.x_hat = {std::cos(a), std::sin(a)};
          s.theta_hat = {std::cos(b), std::sin(b)};
          s.value = {io::parse_double(f[2]), io::parse_double(f[3])};
        } else {
          throw ParameterError(i_csv + ": rows need 4 or 6 columns");
        }
        if (std::abs(norm(s.x_hat) - 1.0) > 1e-9 || std::abs(norm(s.theta_hat) - 1.0) > 1e-9) {
          throw ParameterError(i_csv + ": directions must be unit vectors");
        }
        samples.push_back(s);
      }
      DataGrid data = ingest_farfield(samples, setup.k, rule, setup.p_scale(), i_cutoff);
      data.kappa = effective_kernel_scale(setup);
      data.geometry = setup.data_domain().name();
      const double missing = data.missing_weight_fraction();
      if (missing > 0.0) err << "warning: " << missing * 100.0 << "% of the data-domain weight is missing\n";
      write_data(i_out, data, setup_header(setup, opts));
      return 0;
    }

    if (*recon) {
      json head;
      const DataGrid data = load_data(r_data, &head);
      const auto b = load_basis(r_basis);
      double alpha = r_alpha;
      if (!r_auto.empty()) alpha = choose_alpha_partial(r_auto[0], r_auto[1], r_auto[2], r_auto[3]);
      if (!(alpha > 0.0)) throw ParameterError("give --alpha > 0 or --auto-alpha delta E sigma c0");
      ReconstructionResult res;
      std::function<bool(Point2)> inside;
      Point2 half{};
      if (b.disk) {
        const double k = head.value("k", 0.0);
        if (!(k > 0.0)) throw ParameterError(r_data + ": header lacks the wavenumber k");
        if (head.contains("c") && std::abs(head["c"].get<double>() - b.disk->c) > 1e-12 * b.disk->c) {
          throw ParameterError("basis c does not match the data");
        }
        const auto sb = scale_to_data_domain(*b.disk, k);
        res = reconstruct_full(data, sb, alpha, r_realify);
        half = {sb.radius, sb.radius};
      } else {
        res = reconstruct_partial(data, *b.symset, alpha, r_realify);
        half = b.symset->geometry.half_box();
      }
      json modes = json::array();
      for (std::size_t t = 0; t < res.cutoff_set.size(); ++t) {
        modes.push_back(mode_entry(b.disk, b.symset, res.cutoff_set[t], res.coefficients[t]));
      }
      json result = {{"alpha", res.alpha},
                     {"beta_alpha", res.beta_alpha},
                     {"delta", res.delta},
                     {"regime", head.value("regime", std::string(b.disk ? "full" : "partial"))},
                     {"mode_count", res.mode_count()},
                     {"residual", res.residual},
                     {"cutoff_truncated", res.cutoff_truncated},
                     {"realified", res.realified},
                     {"dropped_imaginary", res.dropped_imaginary},
                     {"modes", modes}};
      {
        auto o = open_out(r_out);
        o << result.dump(2) << "\n";
      }
      if (!r_field.empty()) {
        if (r_grid < 2) throw ParameterError("--field-grid must be >= 2");
        auto o = open_out(r_field);
        o << "x,y,q\n";
        for (int iy = 0; iy < r_grid; ++iy) {
          for (int ix = 0; ix < r_grid; ++ix) {
            const Point2 p{-half.x + 2.0 * half.x * ix / (r_grid - 1), -half.y + 2.0 * half.y * iy / (r_grid - 1)};
            o << io::format_double(p.x) << ',' << io::format_double(p.y) << ',' << io::format_double(res.field(p).real())
              << '\n';
          }
        }
      }
      if (res.cutoff_truncated) err << "warning: the cutoff set may extend past the computed modes\n";
      out << "retained " << res.mode_count() << " modes, beta(alpha) = " << res.beta_alpha << "\n";
      return 0;
    }

    if (*extra) {
      json head;
      const DataGrid data = load_data(e_data, &head);
      const auto b = load_basis(e_basis);
      if (!b.disk) throw ParameterError("extrapolate needs a disk basis (full-aperture data)");
      const double k = head.value("k", 0.0);
      if (!(k > 0.0)) throw ParameterError(e_data + ": header lacks the wavenumber k");
      const auto sb = scale_to_data_domain(*b.disk, k);
      std::vector<Point2> targets;
      for (const auto& f : read_csv(e_targets)) {
        if (f.size() < 2) throw ParameterError(e_targets + ": rows need x,y");
        targets.push_back({io::parse_double(f[0]), io::parse_double(f[1])});
      }
      const auto vals = extrapolate(data, sb, targets, e_floor);
      auto o = open_out(e_out);
      o << "x,y,re,im\n";
      for (std::size_t t = 0; t < targets.size(); ++t) {
        o << io::format_double(targets[t].x) << ',' << io::format_double(targets[t].y) << ','
          << io::format_double(vals[t].real()) << ',' << io::format_double(vals[t].imag()) << '\n';
      }
      return 0;
    }

    if (*valid) {
      const auto b = load_basis(v_basis);
      ValidationReport rep = b.disk ? validate_basis(*b.disk) : validate_basis(*b.symset);
      if (!v_against.empty()) {
        if (!b.symset) throw ParameterError("--against needs a symset basis in --basis");
        const auto d = io::load_disk_basis(v_against);
        if (!d) throw ComputationError(v_against + ": not a valid disk basis cache");
        rep.checks.push_back(cross_check_disk(*b.symset, *d, 20));
      }
      json list = json::array();
      for (const auto& c : rep.checks) {
        list.push_back({{"check", c.check}, {"residual", c.residual}, {"threshold", c.threshold}, {"passed", c.passed}});
      }
      if (v_out.empty()) {
        out << list.dump(2) << "\n";
      } else {
        auto o = open_out(v_out);
        o << list.dump(2) << "\n";
      }
      err << (rep.passed() ? "all checks passed\n" : "some checks failed\n");
      return (v_strict && !rep.passed()) ? 1 : 0;
    }

    if (*expt) {
      const auto setup = load_setup(x_setup, nullptr, err);
      const auto b = load_basis(x_basis);
      const auto deltas = parse_list(x_deltas);
      const auto alphas = parse_list(x_alphas);
      const auto rows = b.disk ? experiment_stability(setup, scale_to_data_domain(*b.disk, setup.k), deltas, alphas,
                                                      x_seeds, x_seed)
                               : experiment_stability(setup, *b.symset, deltas, alphas, x_seeds, x_seed);
      auto o = open_out(x_out);
      o << "delta,alpha,modes,beta,error_mean,error_max,bound,projection_error\n";
      std::size_t violations = 0;
      for (const auto& r : rows) {
        o << io::format_double(r.delta) << ',' << io::format_double(r.alpha) << ',' << r.modes << ','
          << io::format_double(r.beta) << ',' << io::format_double(r.error_mean) << ','
          << io::format_double(r.error_max) << ',' << io::format_double(r.bound) << ','
          << io::format_double(r.projection_error) << '\n';
        violations += r.error_max > r.bound * (1.0 + 1e-12) ? 1 : 0;
      }
      err << rows.size() << " rows, " << violations << " above the bound\n";
      return 0;
    }
  } catch (const EmptyCutoffError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ComputationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const io::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace prolate::cli
