#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fbms/run_config.hpp"
#include "fbms/spectral.hpp"

namespace fbms {

std::string_view version();

enum class Subcommand { topo, validate, spectrum, index, compare, heat, sobolev, bounds, report };

std::string_view to_string(Subcommand sub);
std::optional<Subcommand> subcommand_from_string(std::string_view name);
const std::vector<Subcommand>& all_subcommands();

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAssertion = 2;

struct Assertion {
  std::string name;
  bool pass = false;
  /// Informational checks are reported but never change the exit code.
  bool asserted = true;
};

struct RunOutput {
  int exit_code = kExitPass;
  /// Full artifact: tool, version, config hash, seed, config, surface, result, assertions.
  nlohmann::json json;
  /// Human-readable summary.
  std::string text;
  /// Heat subcommand only: t, traces, bounds and pass flags per grid point.
  std::string csv;
  std::vector<Assertion> assertions;
};

/// Surface described by a config: built or loaded, then refined.
TriangulatedSurface load_surface(const RunConfig& config);
/// "builtin:flat_disk:r16:l0" or "mesh:<file name>:l0".
std::string surface_id(const RunConfig& config);

/// Runs one subcommand. Module errors propagate as fbms::Error; assertion
/// failures are reported through exit_code.
RunOutput run(Subcommand sub, const RunConfig& config);

}  // namespace fbms
