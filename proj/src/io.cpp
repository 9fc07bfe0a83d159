#include "prolate/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "prolate/errors.hpp"

namespace prolate::io {

namespace {

constexpr const char* kMagic = "GPSWF1";

std::string quantised(double v) { return std::to_string(std::llround(v * 1e12)); }

// Little-endian double buffer.
class Payload {
 public:
  void put(double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = byteswap(bits);
    char b[8];
    std::memcpy(b, &bits, 8);
    bytes_.append(b, 8);
  }
  double get() {
    if (pos_ + 8 > bytes_.size()) throw ComputationError("cache payload truncated");
    std::uint64_t bits;
    std::memcpy(&bits, bytes_.data() + pos_, 8);
    pos_ += 8;
    if constexpr (std::endian::native == std::endian::big) bits = byteswap(bits);
    return std::bit_cast<double>(bits);
  }
  std::size_t get_count() {
    const double v = get();
    if (!(v >= 0.0) || v > 1e9 || v != std::floor(v)) throw ComputationError("cache payload corrupt");
    return static_cast<std::size_t>(v);
  }
  std::string& bytes() { return bytes_; }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  static std::uint64_t byteswap(std::uint64_t v) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  std::string bytes_;
  std::size_t pos_ = 0;
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_cache(const std::filesystem::path& path, json meta, Payload& payload) {
  meta["payload_bytes"] = payload.bytes().size();
  meta["checksum"] = hex64(fnv1a(payload.bytes().data(), payload.bytes().size()));
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ComputationError("cannot write " + tmp.string());
    out << kMagic << '\n' << meta.dump() << '\n';
    out.write(payload.bytes().data(), static_cast<std::streamsize>(payload.bytes().size()));
    if (!out) throw ComputationError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// Header and verified payload, or nullopt.
std::optional<std::pair<json, Payload>> read_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string magic;
  std::string line;
  if (!std::getline(in, magic) || magic != kMagic || !std::getline(in, line)) return std::nullopt;
  json meta = json::parse(line, nullptr, false);
  if (meta.is_discarded() || !meta.is_object() || !meta.contains("payload_bytes") || !meta.contains("checksum")) {
    return std::nullopt;
  }
  const auto n = meta["payload_bytes"].get<std::size_t>();
  Payload p;
  p.bytes().resize(n);
  in.read(p.bytes().data(), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n || in.peek() != std::char_traits<char>::eof()) return std::nullopt;
  if (hex64(fnv1a(p.bytes().data(), n)) != meta["checksum"].get<std::string>()) return std::nullopt;
  return std::make_pair(std::move(meta), std::move(p));
}

Point2 point(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw ParameterError(std::string(what) + ": expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

double number(const json& j, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ParameterError(std::string("missing field '") + key + "'");
  }
  if (!j[key].is_number()) throw ParameterError(std::string("field '") + key + "' must be a number");
  const double v = j[key].get<double>();
  if (!std::isfinite(v)) throw ParameterError(std::string("field '") + key + "' must be finite");
  return v;
}

}  // namespace

std::uint64_t fnv1a(const void* data, std::size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::string CacheKey::canonical() const {
  std::ostringstream s;
  s << "v" << kFormatVersion << ";" << kind << ";c=" << quantised(c);
  if (kind == "disk") {
    s << ";m=" << m_max << ";n=" << n_max << ";J=" << truncation;
  } else {
    s << ";geometry=" << geometry << ";radius=" << quantised(radius) << ";theta=" << quantised(theta)
      << ";x=" << quantised(x_star.x) << "," << quantised(x_star.y) << ";h=" << quantised(h) << ";res=" << resolution
      << ";scheme=" << scheme << ";modes=" << modes;
  }
  return s.str();
}

std::string CacheKey::file_name() const {
  const auto text = canonical();
  return kind + "-" + hex64(fnv1a(text.data(), text.size())) + ".gpswf";
}

CacheKey key_for(const DiskBasis& basis) {
  CacheKey k;
  k.kind = "disk";
  k.c = basis.c;
  k.m_max = basis.m_max;
  k.n_max = basis.n_max;
  k.truncation = basis.truncation;
  return k;
}

CacheKey key_for(const SymSetBasis& basis, int resolution, QuadScheme scheme, int requested_modes) {
  CacheKey k;
  k.kind = "symset";
  k.c = basis.c;
  k.geometry = basis.geometry.name();
  k.radius = basis.geometry.radius;
  k.theta = basis.geometry.theta;
  k.x_star = basis.geometry.x_star;
  k.h = basis.geometry.h;
  k.resolution = resolution;
  k.scheme = to_string(scheme);
  k.modes = requested_modes;
  return k;
}

void save_basis(const DiskBasis& basis, const std::filesystem::path& path) {
  Payload p;
  json ids = json::array();
  json usable = json::array();
  p.put(static_cast<double>(basis.size()));
  for (const auto& m : basis.modes) {
    ids.push_back({m.id.m, m.id.n, m.id.ell});
    usable.push_back(m.usable);
    for (double v : {double(m.id.m), double(m.id.n), double(m.id.ell), m.chi, m.chi_radial, m.alpha.real(),
                     m.alpha.imag(), m.gamma, m.usable ? 1.0 : 0.0, double(m.coeffs.size())}) {
      p.put(v);
    }
    for (double a : m.coeffs) p.put(a);
  }
  json meta = {{"kind", "disk"},        {"version", kFormatVersion}, {"key", key_for(basis).canonical()},
               {"c", basis.c},          {"m_max", basis.m_max},      {"n_max", basis.n_max},
               {"J", basis.truncation}, {"geometry", "disk"},        {"modes", ids},
               {"usable", usable}};
  write_cache(path, meta, p);
}

void save_basis(const SymSetBasis& basis, const CacheKey& key, const std::filesystem::path& path) {
  Payload p;
  const std::size_t n = basis.quad.size();
  p.put(static_cast<double>(n));
  p.put(basis.quad.paired ? 1.0 : 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    p.put(basis.quad.nodes[j].x);
    p.put(basis.quad.nodes[j].y);
    p.put(basis.quad.weights[j]);
  }
  p.put(static_cast<double>(basis.size()));
  json parities = json::array();
  for (const auto& m : basis.modes) {
    parities.push_back(m.parity == Parity::even ? "even" : "odd");
    p.put(m.parity == Parity::even ? 0.0 : 1.0);
    p.put(m.alpha.real());
    p.put(m.alpha.imag());
    for (double v : m.values) p.put(v);
  }
  p.put(static_cast<double>(basis.spectrum.size()));
  for (auto a : basis.spectrum) {
    p.put(a.real());
    p.put(a.imag());
  }
  json meta = {{"kind", "symset"},
               {"version", kFormatVersion},
               {"key", key.canonical()},
               {"c", basis.c},
               {"geometry", basis.geometry.name()},
               {"radius", basis.geometry.radius},
               {"theta", basis.geometry.theta},
               {"x_star", {basis.geometry.x_star.x, basis.geometry.x_star.y}},
               {"h", basis.geometry.h},
               {"resolution", key.resolution},
               {"scheme", key.scheme},
               {"requested_modes", key.modes},
               {"truncated", basis.truncated},
               {"modes", parities}};
  write_cache(path, meta, p);
}

json read_basis_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open basis file " + path.string());
  std::string magic;
  std::string line;
  if (!std::getline(in, magic) || magic != kMagic || !std::getline(in, line)) {
    throw ParameterError(path.string() + " is not a basis cache file");
  }
  json meta = json::parse(line, nullptr, false);
  if (meta.is_discarded() || !meta.is_object()) throw ParameterError(path.string() + ": malformed metadata");
  return meta;
}

std::optional<DiskBasis> load_disk_basis(const std::filesystem::path& path) {
  auto cache = read_cache(path);
  if (!cache || cache->first.value("kind", "") != "disk") return std::nullopt;
  auto& [meta, p] = *cache;
  try {
    DiskBasis b;
    b.c = meta.at("c").get<double>();
    b.m_max = meta.at("m_max").get<int>();
    b.n_max = meta.at("n_max").get<int>();
    b.truncation = meta.at("J").get<int>();
    const std::size_t count = p.get_count();
    for (std::size_t i = 0; i < count; ++i) {
      DiskMode m;
      m.id.m = static_cast<int>(p.get());
      m.id.n = static_cast<int>(p.get());
      m.id.ell = static_cast<int>(p.get());
      m.chi = p.get();
      m.chi_radial = p.get();
      const double re = p.get();
      m.alpha = {re, p.get()};
      m.gamma = p.get();
      m.usable = p.get() != 0.0;
      m.coeffs.resize(p.get_count());
      for (auto& a : m.coeffs) a = p.get();
      b.modes.push_back(std::move(m));
    }
    if (!p.done()) return std::nullopt;
    return b;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<SymSetBasis> load_symset_basis(const std::filesystem::path& path) {
  auto cache = read_cache(path);
  if (!cache || cache->first.value("kind", "") != "symset") return std::nullopt;
  auto& [meta, p] = *cache;
  try {
    SymSetBasis b;
    b.c = meta.at("c").get<double>();
    const auto g = meta.at("geometry").get<std::string>();
    b.geometry.kind = g == "disk" ? GeometryKind::disk : g == "L" ? GeometryKind::limited_aperture : GeometryKind::multi_freq;
    b.geometry.radius = meta.at("radius").get<double>();
    b.geometry.theta = meta.at("theta").get<double>();
    b.geometry.x_star = point(meta.at("x_star"), "x_star");
    b.geometry.h = meta.at("h").get<double>();
    b.truncated = meta.at("truncated").get<bool>();
    const std::size_t n = p.get_count();
    b.quad.paired = p.get() != 0.0;
    b.quad.nodes.resize(n);
    b.quad.weights.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      b.quad.nodes[j].x = p.get();
      b.quad.nodes[j].y = p.get();
      b.quad.weights[j] = p.get();
    }
    const std::size_t count = p.get_count();
    for (std::size_t i = 0; i < count; ++i) {
      SymSetMode m;
      m.parity = p.get() == 0.0 ? Parity::even : Parity::odd;
      const double re = p.get();
      m.alpha = {re, p.get()};
      m.values.resize(n);
      for (auto& v : m.values) v = p.get();
      b.modes.push_back(std::move(m));
    }
    b.spectrum.resize(p.get_count());
    for (auto& a : b.spectrum) {
      const double re = p.get();
      a = {re, p.get()};
    }
    if (!p.done()) return std::nullopt;
    return b;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && (*b == ' ' || *b == '\t')) ++b;
  while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
  if (b < e && *b == '+') ++b;
  const auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) throw ParameterError("not a number: '" + s + "'");
  return v;
}

void write_datagrid(const DataGrid& data, const json& extra, std::ostream& out) {
  json head = extra.is_object() ? extra : json::object();
  head["kappa"] = data.kappa;
  head["delta"] = data.delta;
  head["delta_rel"] = data.delta_rel;
  head["seed"] = data.seed ? json(*data.seed) : json(nullptr);
  head["geometry"] = data.geometry;
  head["count"] = data.size();
  head["noise_model"] = data.noise_model;
  head["under_resolved"] = data.under_resolved;
  head["paired"] = data.quad.paired;
  out << head.dump() << '\n' << "px,py,weight,re,im,flag\n";
  for (std::size_t j = 0; j < data.size(); ++j) {
    const int flag = (!data.missing.empty() && data.missing[j]) ? 1 : 0;
    out << format_double(data.quad.nodes[j].x) << ',' << format_double(data.quad.nodes[j].y) << ','
        << format_double(data.quad.weights[j]) << ',' << format_double(data.values[j].real()) << ','
        << format_double(data.values[j].imag()) << ',' << flag << '\n';
  }
}

DataGrid read_datagrid(std::istream& in, json* header) {
  std::string line;
  if (!std::getline(in, line)) throw ParameterError("data file is empty");
  json head = json::parse(line, nullptr, false);
  if (head.is_discarded() || !head.is_object()) throw ParameterError("data file: first line must be a JSON header");
  if (!std::getline(in, line) || line.rfind("px,py,weight,re,im,flag", 0) != 0) {
    throw ParameterError("data file: missing column line px,py,weight,re,im,flag");
  }
  DataGrid d;
  try {
    d.kappa = head.value("kappa", 0.0);
    d.delta = head.value("delta", 0.0);
    d.delta_rel = head.value("delta_rel", 0.0);
    if (head.contains("seed") && !head["seed"].is_null()) d.seed = head["seed"].get<std::uint64_t>();
    d.geometry = head.value("geometry", std::string("disk"));
    d.noise_model = head.value("noise_model", std::string("none"));
    d.under_resolved = head.value("under_resolved", false);
    d.quad.paired = head.value("paired", false);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("data file header: ") + e.what());
  }
  std::size_t row = 2;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 6) throw ParameterError("data file row " + std::to_string(row) + ": expected 6 columns");
    d.quad.nodes.push_back({parse_double(f[0]), parse_double(f[1])});
    d.quad.weights.push_back(parse_double(f[2]));
    d.values.emplace_back(parse_double(f[3]), parse_double(f[4]));
    const double flag = parse_double(f[5]);
    if (flag != 0.0 && flag != 1.0) throw ParameterError("data file row " + std::to_string(row) + ": flag must be 0 or 1");
    d.missing.push_back(flag != 0.0 ? 1 : 0);
  }
  if (head.contains("count") && head["count"].get<std::size_t>() != d.size()) {
    throw ParameterError("data file: row count does not match header count");
  }
  if (header) *header = std::move(head);
  return d;
}

ContrastField parse_contrast(const json& j) {
  try {
    if (!j.is_object()) throw ParameterError("contrast must be a JSON object");
    ContrastField q;
    if (j.contains("shapes")) {
      for (const auto& s : j.at("shapes")) {
        Shape shape;
        const auto type = s.value("type", std::string("disk"));
        if (type == "disk") {
          shape.kind = Shape::Kind::disk;
        } else if (type == "annulus") {
          shape.kind = Shape::Kind::annulus;
          shape.inner = number(s, "inner");
        } else {
          throw ParameterError("unknown shape type '" + type + "'");
        }
        shape.center = s.contains("center") ? point(s.at("center"), "center") : Point2{};
        shape.radius = number(s, "radius");
        shape.value = number(s, "value", 1.0);
        if (!(shape.radius > 0.0) || shape.inner < 0.0 || shape.inner >= shape.radius) {
          throw ParameterError("shape needs radius > 0 and 0 <= inner < radius");
        }
        if (shape.value < 0.0) throw ParameterError("contrast values must be >= 0");
        q.shapes.push_back(shape);
      }
    }
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      CellGrid cg;
      cg.origin = point(g.at("origin"), "grid.origin");
      cg.dx = number(g, "dx");
      cg.dy = number(g, "dy");
      const auto& v = g.at("values");
      if (!v.is_array() || v.empty()) throw ParameterError("grid.values must be a non-empty array");
      if (v[0].is_array()) {
        cg.ny = static_cast<int>(v.size());
        cg.nx = static_cast<int>(v[0].size());
        for (const auto& rowv : v) {
          if (!rowv.is_array() || static_cast<int>(rowv.size()) != cg.nx) throw ParameterError("grid rows differ in length");
          for (const auto& x : rowv) cg.values.push_back(x.get<double>());
        }
      } else {
        cg.nx = g.at("nx").get<int>();
        cg.ny = g.at("ny").get<int>();
        for (const auto& x : v) cg.values.push_back(x.get<double>());
      }
      if (cg.nx < 1 || cg.ny < 1 || cg.values.size() != static_cast<std::size_t>(cg.nx) * cg.ny ||
          !(cg.dx > 0.0) || !(cg.dy > 0.0)) {
        throw ParameterError("grid: need dx, dy > 0 and nx * ny values");
      }
      for (double x : cg.values) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw ParameterError("contrast values must be finite and >= 0");
      }
      q.grid = std::move(cg);
    }
    if (q.shapes.empty() && !q.grid) throw ParameterError("contrast needs shapes or a grid");
    return q;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("contrast: ") + e.what());
  }
}

ProblemSetup parse_setup(const json& j) {
  try {
    if (!j.is_object()) throw ParameterError("setup must be a JSON object");
    ProblemSetup s;
    s.regime = parse_regime(j.value("regime", std::string("full")));
    if (s.regime == Regime::multifreq) {
      s.k = j.contains("K") ? number(j, "K") : number(j, "k");
    } else {
      s.k = number(j, "k");
    }
    if (s.regime == Regime::limited) s.theta = number(j, "theta");
    if (s.regime == Regime::multifreq) s.x_star = point(j.at("x_star"), "x_star");
    s.c = j.contains("c_param") ? number(j, "c_param") : number(j, "c", 0.0);
    s.contrast = parse_contrast(j.at("contrast"));
    return s;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("setup: ") + e.what());
  }
}

}  // namespace prolate::io
