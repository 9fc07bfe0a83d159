#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "prolate/cli.hpp"
#include "prolate/errors.hpp"
#include "prolate/io.hpp"

using namespace prolate;
namespace fs = std::filesystem;

namespace {

struct Sandbox {
  fs::path root;
  Sandbox() {
    root = fs::temp_directory_path() / ("prolate-cli-test-" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Sandbox() { fs::remove_all(root); }
  std::string path(const std::string& name) const { return (root / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(root / name) << text; }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "prolate");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

const char* kSetup = R"({"regime":"full","k":2.0,"c_param":5.0,
  "contrast":{"shapes":[{"type":"disk","center":[0.2,-0.1],"radius":0.5,"value":1.0}]},
  "basis":{"m_max":4,"n_max":4}})";

}  // namespace

TEST_CASE("basis cache is reused and byte-stable") {
  Sandbox sb;
  const auto first = invoke({"basis", "disk", "--c", "5", "--m-max", "4", "--n-max", "4", "-o", sb.path("cache")});
  REQUIRE(first.code == 0);
  const std::string file = trim(first.out);
  const auto bytes = slurp(file);
  const auto second = invoke({"basis", "disk", "--c", "5", "--m-max", "4", "--n-max", "4", "-o", sb.path("cache")});
  CHECK(second.code == 0);
  CHECK(trim(second.out) == file);
  CHECK(second.err.find("cache hit") != std::string::npos);
  CHECK(slurp(file) == bytes);

  // Corrupt one payload byte: the checksum rejects it and the basis is recomputed.
  std::string broken = bytes;
  broken[broken.size() - 3] ^= 0x5a;
  std::ofstream(file, std::ios::binary) << broken;
  CHECK_FALSE(io::load_disk_basis(file).has_value());
  const auto third = invoke({"basis", "disk", "--c", "5", "--m-max", "4", "--n-max", "4", "-o", sb.path("cache")});
  CHECK(third.code == 0);
  CHECK(third.err.find("computing") != std::string::npos);
  CHECK(slurp(file) == bytes);
}

TEST_CASE("environment variable selects the cache directory") {
  Sandbox sb;
  ::setenv("PROLATE_CACHE_DIR", sb.path("envcache").c_str(), 1);
  const auto r = invoke({"basis", "disk", "--c", "3", "--m-max", "1", "--n-max", "1"});
  ::unsetenv("PROLATE_CACHE_DIR");
  CHECK(r.code == 0);
  CHECK(trim(r.out).rfind(sb.path("envcache"), 0) == 0);
}

TEST_CASE("disk basis round-trips bitwise through the cache format") {
  Sandbox sb;
  const auto b = compute_disk_basis(7.0, 3, 3);
  io::save_basis(b, sb.path("b.gpswf"));
  const auto back = io::load_disk_basis(sb.path("b.gpswf"));
  REQUIRE(back.has_value());
  REQUIRE(back->size() == b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(back->modes[i].id == b.modes[i].id);
    CHECK(back->modes[i].chi == b.modes[i].chi);
    CHECK(back->modes[i].alpha == b.modes[i].alpha);
    CHECK(back->modes[i].coeffs == b.modes[i].coeffs);
  }
  const auto header = io::read_basis_header(sb.path("b.gpswf"));
  CHECK(header["kind"] == "disk");
  CHECK(header["modes"].size() == b.size());
}

TEST_CASE("data grid files round-trip bitwise") {
  DataGrid d;
  d.quad = polar_gauss_disk(1.3, 5, 8);
  for (std::size_t j = 0; j < d.quad.size(); ++j) d.values.emplace_back(std::sin(1.0 + j) / 3.0, -1e-300 * j);
  d.missing.assign(d.quad.size(), 0);
  d.missing[2] = 1;
  d.kappa = 4.0 / 3.0;
  d.seed = 18446744073709551615ull;
  std::stringstream s;
  io::write_datagrid(d, {{"k", 2.0}}, s);
  io::json head;
  const auto back = io::read_datagrid(s, &head);
  CHECK(back.quad.nodes == d.quad.nodes);
  CHECK(back.quad.weights == d.quad.weights);
  CHECK(back.values == d.values);
  CHECK(back.missing == d.missing);
  CHECK(back.kappa == d.kappa);
  CHECK(back.seed == d.seed);
  CHECK(back.quad.paired);
  CHECK(head["k"] == 2.0);

  std::stringstream bad("{\"count\": 1}\npx,py,weight,re,im,flag\n1,2,3\n");
  CHECK_THROWS_AS(io::read_datagrid(bad, nullptr), ParameterError);
}

TEST_CASE("contrast and setup parsing") {
  const auto q = io::parse_contrast(io::json::parse(
      R"({"shapes":[{"type":"annulus","center":[0,0],"radius":0.5,"inner":0.2}],
          "grid":{"origin":[-1,-1],"dx":0.5,"dy":0.5,"values":[[0,1],[2,0]]}})"));
  CHECK(q.shapes.size() == 1);
  REQUIRE(q.grid.has_value());
  CHECK(q.grid->nx == 2);
  CHECK(q.eval({-0.75, -0.25}) == 2.0);
  CHECK(q.eval({0.3, 0.0}) == 1.0);
  CHECK_THROWS_AS(io::parse_contrast(io::json::parse(R"({"shapes":[{"type":"square","radius":1}]})")), ParameterError);
  CHECK_THROWS_AS(io::parse_contrast(io::json::parse(R"({"shapes":[{"radius":-1}]})")), ParameterError);
  const auto s = io::parse_setup(io::json::parse(
      R"({"regime":"multifreq","K":3,"x_star":[0,1],"c_param":9,"contrast":{"shapes":[{"radius":0.1}]}})"));
  CHECK(s.regime == Regime::multifreq);
  CHECK(effective_kernel_scale(s) == doctest::Approx(1.0));
}

TEST_CASE("synthesize, reconstruct and the exit codes") {
  Sandbox sb;
  sb.write("setup.json", kSetup);
  const auto b = invoke({"basis", "disk", "--c", "5", "--m-max", "4", "--n-max", "4", "-o", sb.path("cache")});
  REQUIRE(b.code == 0);
  const std::string basis = trim(b.out);

  CHECK(invoke({"synthesize", sb.path("setup.json"), "-o", sb.path("d1.csv"), "--noise", "0.01", "--seed", "7"}).code == 0);
  CHECK(invoke({"synthesize", sb.path("setup.json"), "-o", sb.path("d2.csv"), "--noise", "0.01", "--seed", "7"}).code == 0);
  CHECK(slurp(sb.path("d1.csv")) == slurp(sb.path("d2.csv")));

  const auto r = invoke({"reconstruct", sb.path("d1.csv"), "--basis", basis, "--alpha", "1e-3", "-o", sb.path("rec.json"),
                      "--field-csv", sb.path("field.csv"), "--field-grid", "8"});
  CHECK(r.code == 0);
  const auto rec = io::json::parse(slurp(sb.path("rec.json")));
  CHECK(rec["alpha"] == 1e-3);
  CHECK(rec["modes"].size() == rec["mode_count"].get<std::size_t>());
  CHECK(slurp(sb.path("field.csv")).rfind("x,y,q\n", 0) == 0);

  const auto empty = invoke({"reconstruct", sb.path("d1.csv"), "--basis", basis, "--alpha", "1", "-o", sb.path("e.json")});
  CHECK(empty.code == 1);
  CHECK(empty.err.find("empty cutoff") != std::string::npos);

  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"reconstruct", sb.path("d1.csv")}).code == 2);
  CHECK(invoke({"basis", "disk", "--c", "5", "--bogus", "1"}).code == 2);
  CHECK(invoke({"synthesize", sb.path("missing.json"), "-o", sb.path("x.csv")}).code == 2);

  sb.write("outside.json", R"({"regime":"full","k":1,"c_param":1,"contrast":{"shapes":[{"radius":0.6}]}})");
  const auto outside = invoke({"synthesize", sb.path("outside.json"), "-o", sb.path("x.csv")});
  CHECK(outside.code == 2);
  CHECK(outside.err.find("not contained") != std::string::npos);

  // A basis with a different (m_max, n_max) has a different D_F rule.
  const auto other = invoke({"basis", "disk", "--c", "5", "--m-max", "3", "--n-max", "4", "-o", sb.path("cache")});
  CHECK(invoke({"reconstruct", sb.path("d1.csv"), "--basis", trim(other.out), "--alpha", "1e-3", "-o", sb.path("m.json")})
            .code == 2);

  CHECK(invoke({"validate", "--basis", basis, "-o", sb.path("rep.json")}).code == 0);
  const auto rep = io::json::parse(slurp(sb.path("rep.json")));
  for (const auto& c : rep) CHECK(c["passed"].get<bool>());
}

TEST_CASE("experiment table and extrapolation output") {
  Sandbox sb;
  sb.write("setup.json", kSetup);
  const std::string basis = trim(invoke({"basis", "disk", "--c", "5", "--m-max", "4", "--n-max", "4", "-o", sb.path("c")}).out);
  const auto e = invoke({"experiment", sb.path("setup.json"), "--basis", basis, "--alphas", "0.1,0.03", "--deltas",
                      "0,1e-2", "--seeds", "3", "-o", sb.path("t.csv")});
  CHECK(e.code == 0);
  std::istringstream t(slurp(sb.path("t.csv")));
  std::string line;
  std::getline(t, line);
  CHECK(line == "delta,alpha,modes,beta,error_mean,error_max,bound,projection_error");
  int rows = 0;
  while (std::getline(t, line)) ++rows;
  CHECK(rows == 4);

  CHECK(invoke({"synthesize", sb.path("setup.json"), "-o", sb.path("d.csv")}).code == 0);
  sb.write("targets.csv", "x,y\n0.1,0.2\n3.0,0.0\n");
  CHECK(invoke({"extrapolate", sb.path("d.csv"), "--basis", basis, "--targets", sb.path("targets.csv"), "-o",
             sb.path("ext.csv")})
            .code == 0);
  CHECK(slurp(sb.path("ext.csv")).rfind("x,y,re,im\n0.1,0.2,", 0) == 0);
}
