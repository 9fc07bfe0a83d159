#pragma once

// File formats: binary basis cache, DataGrid CSV with a JSON header, and
// JSON contrast/setup configuration.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "prolate/disk_basis.hpp"
#include "prolate/forward.hpp"
#include "prolate/setup.hpp"
#include "prolate/symset_basis.hpp"

namespace prolate::io {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

/// Canonical cache key of a basis request. Real parameters are quantised
/// to 1e-12 before they enter the key.
struct CacheKey {
  std::string kind;  // "disk" or "symset"
  double c = 0.0;
  int m_max = 0;
  int n_max = 0;
  int truncation = 0;
  std::string geometry = "disk";
  double radius = 1.0;
  double theta = 0.0;
  Point2 x_star{1.0, 0.0};
  double h = 1.0;
  int resolution = 0;
  std::string scheme;
  int modes = 0;

  std::string canonical() const;
  std::string file_name() const;
};

CacheKey key_for(const DiskBasis& basis);
CacheKey key_for(const SymSetBasis& basis, int resolution, QuadScheme scheme, int requested_modes);

std::uint64_t fnv1a(const void* data, std::size_t bytes);

void save_basis(const DiskBasis& basis, const std::filesystem::path& path);
void save_basis(const SymSetBasis& basis, const CacheKey& key, const std::filesystem::path& path);

/// Reads the metadata line of a cache file ("disk" or "symset" in "kind").
json read_basis_header(const std::filesystem::path& path);

/// nullopt when the file is missing, malformed or fails its checksum.
std::optional<DiskBasis> load_disk_basis(const std::filesystem::path& path);
std::optional<SymSetBasis> load_symset_basis(const std::filesystem::path& path);

/// Locale-independent shortest round-trip formatting.
std::string format_double(double v);
double parse_double(const std::string& s);

void write_datagrid(const DataGrid& data, const json& extra, std::ostream& out);
DataGrid read_datagrid(std::istream& in, json* header = nullptr);

ContrastField parse_contrast(const json& j);
ProblemSetup parse_setup(const json& j);

}  // namespace prolate::io
