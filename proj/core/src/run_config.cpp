#include "fbms/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "fbms/errors.hpp"

namespace fbms {

int default_resolution(BuiltinKind kind) { return kind == BuiltinKind::critical_catenoid ? 40 : 16; }

namespace {

template <typename T>
T get_as(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& target) {
  if (j.contains(key)) target = get_as<T>(j, key);
}

template <typename T>
void read(const nlohmann::json& j, const char* key, std::optional<T>& target) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null())
    target.reset();
  else
    target = get_as<T>(j, key);
}

template <typename T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

const std::set<std::string> kKeys = {"builtin", "mesh",     "format",  "resolution",    "refine",  "ambient",
                                     "form",    "k",        "tol_zero", "tol_min",      "tol_orth", "t_grid",
                                     "c1",      "c2",       "c",        "alpha_override", "xi",     "samples",
                                     "max_heat_dofs", "seed", "out",    "json"};

}  // namespace

RunConfig config_from_json(const nlohmann::json& j, RunConfig base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!kKeys.count(key)) throw ConfigError("unknown config field '" + key + "'");
  RunConfig c = std::move(base);
  if (j.contains("builtin")) {
    if (j["builtin"].is_null()) {
      c.builtin.reset();
    } else {
      const auto name = get_as<std::string>(j, "builtin");
      c.builtin = builtin_from_string(name);
      if (!c.builtin) throw ConfigError("unknown builtin surface '" + name + "'");
    }
  }
  if (j.contains("mesh")) {
    if (j["mesh"].is_null())
      c.mesh.reset();
    else
      c.mesh = std::filesystem::path(get_as<std::string>(j, "mesh"));
  }
  if (j.contains("format")) {
    if (j["format"].is_null()) {
      c.format.reset();
    } else {
      const auto name = get_as<std::string>(j, "format");
      c.format = mesh_format_from_string(name);
      if (!c.format) throw ConfigError("unknown mesh format '" + name + "'");
    }
  }
  read(j, "resolution", c.resolution);
  read(j, "refine", c.refine);
  read(j, "ambient", c.ambient);
  read(j, "form", c.form);
  read(j, "k", c.k);
  read(j, "tol_zero", c.tol_zero);
  read(j, "tol_min", c.tol_min);
  read(j, "tol_orth", c.tol_orth);
  if (j.contains("t_grid")) {
    const auto& g = j["t_grid"];
    if (!g.is_object()) throw ConfigError("t_grid must be an object {lo, hi, count}");
    read(g, "lo", c.t_lo);
    read(g, "hi", c.t_hi);
    read(g, "count", c.t_count);
  }
  read(j, "c1", c.c1);
  read(j, "c2", c.c2);
  read(j, "c", c.c);
  read(j, "alpha_override", c.alpha_override);
  read(j, "xi", c.xi);
  read(j, "samples", c.samples);
  read(j, "max_heat_dofs", c.max_heat_dofs);
  read(j, "seed", c.seed);
  if (j.contains("out")) {
    if (j["out"].is_null())
      c.out.reset();
    else
      c.out = std::filesystem::path(get_as<std::string>(j, "out"));
  }
  read(j, "json", c.json);
  return c;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  return config_from_json(j, std::move(base));
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["builtin"] = c.builtin ? nlohmann::json(std::string(to_string(*c.builtin))) : nlohmann::json(nullptr);
  j["mesh"] = c.mesh ? nlohmann::json(c.mesh->generic_string()) : nlohmann::json(nullptr);
  j["format"] = c.format ? nlohmann::json(*c.format == MeshFormat::off ? "off" : "obj") : nlohmann::json(nullptr);
  j["resolution"] = opt(c.resolution);
  j["refine"] = c.refine;
  j["ambient"] = c.ambient;
  j["form"] = c.form;
  j["k"] = c.k;
  j["tol_zero"] = opt(c.tol_zero);
  j["tol_min"] = c.tol_min;
  j["tol_orth"] = c.tol_orth;
  j["t_grid"] = {{"lo", c.t_lo}, {"hi", c.t_hi}, {"count", c.t_count}};
  j["c1"] = opt(c.c1);
  j["c2"] = opt(c.c2);
  j["c"] = opt(c.c);
  j["alpha_override"] = opt(c.alpha_override);
  j["xi"] = c.xi;
  j["samples"] = c.samples;
  j["max_heat_dofs"] = c.max_heat_dofs;
  j["seed"] = c.seed;
  return j;
}

void validate_config(const RunConfig& c) {
  if (c.builtin.has_value() == c.mesh.has_value()) throw ConfigError("give exactly one of --builtin or --mesh");
  if (c.resolution && *c.resolution < 1) throw ConfigError("resolution must be >= 1");
  if (c.refine < 0) throw ConfigError("refine must be >= 0");
  if (c.k < 1) throw ConfigError("k must be >= 1");
  if (c.tol_zero && !(*c.tol_zero > 0.0)) throw ConfigError("tol_zero must be positive");
  if (!(c.tol_min > 0.0) || !(c.tol_orth > 0.0)) throw ConfigError("tolerances must be positive");
  if (!(c.t_lo > 0.0) || !(c.t_hi >= c.t_lo) || c.t_count < 1) throw ConfigError("t grid needs 0 < lo <= hi and count >= 1");
  for (const auto* v : {&c.c1, &c.c2, &c.c})
    if (*v && !(**v > 0.0)) throw ConfigError("constants must be positive");
  static const std::set<std::string> forms = {"area", "energy", "tangential", "robin", "all"};
  if (!forms.count(c.form)) throw ConfigError("unknown form '" + c.form + "'");
  static const std::set<std::string> presets = {"x", "y", "x2_minus_y2", "bump"};
  if (!presets.count(c.xi)) throw ConfigError("unknown xi preset '" + c.xi + "'");
  if (c.samples < 1) throw ConfigError("samples must be >= 1");
  if (c.max_heat_dofs < 1) throw ConfigError("max_heat_dofs must be >= 1");
}

std::string config_hash(const RunConfig& c) {
  const std::string text = to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fbms
