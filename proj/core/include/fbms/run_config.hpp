#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "fbms/mesh.hpp"

namespace fbms {

/// Everything one CLI run depends on. Serialized canonically for the config hash.
struct RunConfig {
  // Surface source: exactly one of builtin / mesh.
  std::optional<BuiltinKind> builtin;
  std::optional<std::filesystem::path> mesh;
  std::optional<MeshFormat> format;
  /// Built-in resolution; unset means the per-surface default.
  std::optional<int> resolution;
  int refine = 0;

  std::string ambient = "unit_ball_3";
  /// area | energy | tangential | robin | all
  std::string form = "area";
  int k = 20;

  std::optional<double> tol_zero;
  double tol_min = 1e-2;
  double tol_orth = 1e-2;

  double t_lo = 1e-3;
  double t_hi = 1e2;
  int t_count = 32;

  std::optional<double> c1;
  std::optional<double> c2;
  std::optional<double> c;
  std::optional<double> alpha_override;

  /// Normal-section preset for compare: x | y | x2_minus_y2 | bump
  std::string xi = "x";
  int samples = 100;
  int max_heat_dofs = 600;
  std::uint64_t seed = 20240601ULL;

  std::optional<std::filesystem::path> out;
  bool json = false;
};

/// Resolution used when none is given: 16 for disks and the annulus, 40 for the catenoid.
int default_resolution(BuiltinKind kind);

/// Applies the fields present in `j` on top of `base`. Unknown keys are a ConfigError.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Canonical JSON of the fields that influence results (output options excluded).
nlohmann::json to_json(const RunConfig& config);

/// Throws ConfigError on inconsistent or out-of-range fields.
void validate_config(const RunConfig& config);

/// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace fbms
