// fbms: index, nullity and heat-trace checks for free-boundary minimal surfaces.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fbms/errors.hpp"
#include "fbms/pipeline.hpp"

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> builtin, mesh, format, ambient, form, xi, t_grid, out;
  std::optional<int> resolution, refine, k, samples, max_heat_dofs;
  std::optional<double> tol_zero, tol_min, tol_orth, c1, c2, c, alpha_override;
  std::optional<std::uint64_t> seed;
  bool json = false;
};

void add_flags(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config, "JSON config file; flags override its fields");
  app.add_option("--builtin", f.builtin, "flat_disk | critical_catenoid | flat_annulus | offset_disk");
  app.add_option("--mesh", f.mesh, "OFF or OBJ mesh file");
  app.add_option("--format", f.format, "off | obj (default: from the file extension)");
  app.add_option("--resolution", f.resolution, "built-in surface resolution");
  app.add_option("--refine", f.refine, "uniform midpoint refinement levels");
  app.add_option("--ambient", f.ambient, "unit_ball_3 | euclidean_3 | space_form,kappa=K,boundary=R");
  app.add_option("--form", f.form, "area | energy | tangential | robin | all");
  app.add_option("--k", f.k, "eigenvalues to compute");
  app.add_option("--tol-zero", f.tol_zero, "zero-eigenvalue threshold");
  app.add_option("--tol-min", f.tol_min, "mean curvature tolerance for validation");
  app.add_option("--tol-orth", f.tol_orth, "boundary orthogonality tolerance for validation");
  app.add_option("--t-grid", f.t_grid, "heat grid as lo,hi,count (log spaced)");
  app.add_option("--c1", f.c1, "Sobolev constant c1");
  app.add_option("--c2", f.c2, "Sobolev constant c2");
  app.add_option("--c", f.c, "area-index constant c");
  app.add_option("--alpha-override", f.alpha_override, "replace the boundary curvature lower bound alpha");
  app.add_option("--xi", f.xi, "normal section for compare: x | y | x2_minus_y2 | bump");
  app.add_option("--samples", f.samples, "random fields for sobolev");
  app.add_option("--max-heat-dofs", f.max_heat_dofs, "largest bundle size for the dense kernel check");
  app.add_option("--seed", f.seed, "random seed");
  app.add_option("--out", f.out, "write the JSON artifact here (heat also writes a .csv beside it)");
  app.add_flag("--json", f.json, "print the JSON artifact instead of the text summary");
}

fbms::RunConfig build_config(const Flags& f) {
  fbms::RunConfig cfg;
  if (f.config) cfg = fbms::load_config(*f.config);

  nlohmann::json j = nlohmann::json::object();
  // A surface source on the command line replaces the one from the file.
  if (f.builtin) {
    j["builtin"] = *f.builtin;
    j["mesh"] = nullptr;
  }
  if (f.mesh) {
    j["mesh"] = *f.mesh;
    if (!f.builtin) j["builtin"] = nullptr;
  }
  if (f.format) j["format"] = *f.format;
  if (f.resolution) j["resolution"] = *f.resolution;
  if (f.refine) j["refine"] = *f.refine;
  if (f.ambient) j["ambient"] = *f.ambient;
  if (f.form) j["form"] = *f.form;
  if (f.k) j["k"] = *f.k;
  if (f.tol_zero) j["tol_zero"] = *f.tol_zero;
  if (f.tol_min) j["tol_min"] = *f.tol_min;
  if (f.tol_orth) j["tol_orth"] = *f.tol_orth;
  if (f.t_grid) {
    std::vector<std::string> parts;
    std::stringstream ss(*f.t_grid);
    for (std::string part; std::getline(ss, part, ',');) parts.push_back(part);
    if (parts.size() != 3) throw fbms::ConfigError("--t-grid expects lo,hi,count");
    try {
      j["t_grid"] = {{"lo", std::stod(parts[0])}, {"hi", std::stod(parts[1])}, {"count", std::stoi(parts[2])}};
    } catch (const std::exception&) {
      throw fbms::ConfigError("--t-grid expects lo,hi,count");
    }
  }
  if (f.c1) j["c1"] = *f.c1;
  if (f.c2) j["c2"] = *f.c2;
  if (f.c) j["c"] = *f.c;
  if (f.alpha_override) j["alpha_override"] = *f.alpha_override;
  if (f.xi) j["xi"] = *f.xi;
  if (f.samples) j["samples"] = *f.samples;
  if (f.max_heat_dofs) j["max_heat_dofs"] = *f.max_heat_dofs;
  if (f.seed) j["seed"] = *f.seed;
  if (f.out) j["out"] = *f.out;
  if (f.json) j["json"] = true;
  cfg = fbms::config_from_json(j, std::move(cfg));

  // The format follows the file extension unless given.
  if (cfg.mesh && !cfg.format) {
    const auto ext = cfg.mesh->extension().string();
    cfg.format = fbms::mesh_format_from_string(ext.empty() ? ext : ext.substr(1));
    if (!cfg.format) throw fbms::ConfigError("cannot infer mesh format from '" + cfg.mesh->string() + "'; use --format");
  }
  return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fbms::ConfigError("cannot write " + path.string());
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Index and nullity checks for free-boundary minimal surfaces"};
  app.set_version_flag("--version", std::string(fbms::version()));
  app.require_subcommand(1);

  Flags flags;
  std::optional<fbms::Subcommand> chosen;
  for (fbms::Subcommand sub : fbms::all_subcommands()) {
    CLI::App* cmd = app.add_subcommand(std::string(fbms::to_string(sub)));
    add_flags(*cmd, flags);
    cmd->callback([&chosen, sub] { chosen = sub; });
  }
  app.get_subcommand("topo")->description("topology, upsilon and the rank-one Riemann-Roch table");
  app.get_subcommand("validate")->description("free-boundary residuals of the mesh");
  app.get_subcommand("spectrum")->description("eigenvalues of the requested forms");
  app.get_subcommand("index")->description("index and nullity of the requested forms");
  app.get_subcommand("compare")->description("energy/area comparison identity for a normal section");
  app.get_subcommand("heat")->description("heat traces, kernel domination and the Robin count");
  app.get_subcommand("sobolev")->description("Sobolev and boundary-trace ratio statistics");
  app.get_subcommand("bounds")->description("closed-form heat bounds and area bounds");
  app.get_subcommand("report")->description("validation, all spectra and every inequality");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? fbms::kExitPass : fbms::kExitError;
  }

  const std::string name(fbms::to_string(*chosen));
  try {
    const fbms::RunConfig cfg = build_config(flags);
    const fbms::RunOutput out = fbms::run(*chosen, cfg);
    const std::string dump = out.json.dump(2) + "\n";
    if (cfg.json)
      std::cout << dump;
    else
      std::cout << out.text;
    if (cfg.out) {
      write_file(*cfg.out, dump);
      if (!out.csv.empty()) {
        auto csv = *cfg.out;
        write_file(csv.replace_extension(".csv"), out.csv);
      }
    }
    return out.exit_code;
  } catch (const std::exception& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return fbms::kExitError;
  }
}
