#include <gtest/gtest.h>

#include <fstream>

#include "fbms/errors.hpp"
#include "fbms/pipeline.hpp"
#include "fbms/run_config.hpp"

using namespace fbms;

TEST(Config, JsonRoundTripAndHash) {
  RunConfig c;
  c.builtin = BuiltinKind::flat_disk;
  c.resolution = 6;
  c.c1 = 0.5;
  const auto back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
  EXPECT_EQ(config_hash(c).size(), 16u);

  RunConfig d = c;
  d.seed = 1;
  EXPECT_NE(config_hash(d), config_hash(c));
  // Output options do not influence the hash.
  d = c;
  d.json = true;
  d.out = "/tmp/x.json";
  EXPECT_EQ(config_hash(d), config_hash(c));
}

TEST(Config, Errors) {
  EXPECT_THROW(config_from_json({{"bogus", 1}}), ConfigError);
  EXPECT_THROW(config_from_json({{"k", "ten"}}), ConfigError);
  EXPECT_THROW(config_from_json({{"builtin", "sphere"}}), ConfigError);
  EXPECT_THROW(config_from_json({{"t_grid", 3}}), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);

  RunConfig c;
  EXPECT_THROW(validate_config(c), ConfigError);  // no surface
  c.builtin = BuiltinKind::flat_disk;
  EXPECT_NO_THROW(validate_config(c));
  c.tol_min = 0.0;
  EXPECT_THROW(validate_config(c), ConfigError);
  c.tol_min = 1e-2;
  c.resolution = 0;
  EXPECT_THROW(validate_config(c), ConfigError);
  c.resolution = 4;
  c.form = "volume";
  EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(Config, FileOverridesDefaults) {
  const auto path = std::filesystem::temp_directory_path() / "fbms_config_test.json";
  {
    std::ofstream out(path);
    out << R"({"builtin": "critical_catenoid", "k": 8, "t_grid": {"lo": 0.01, "hi": 10, "count": 5}})";
  }
  const auto c = load_config(path);
  EXPECT_EQ(c.builtin, BuiltinKind::critical_catenoid);
  EXPECT_EQ(c.k, 8);
  EXPECT_EQ(c.t_count, 5);
  EXPECT_EQ(default_resolution(*c.builtin), 40);
  std::filesystem::remove(path);
}

TEST(Pipeline, SubcommandNamesAndTopo) {
  for (auto s : all_subcommands()) EXPECT_EQ(subcommand_from_string(to_string(s)), s);
  EXPECT_FALSE(subcommand_from_string("plot"));

  RunConfig c;
  c.builtin = BuiltinKind::flat_annulus;
  c.resolution = 6;
  const auto out = run(Subcommand::topo, c);
  EXPECT_EQ(out.exit_code, kExitPass);
  EXPECT_EQ(out.json["result"]["upsilon"], 1);
  EXPECT_EQ(out.json["config_hash"], config_hash(c));
  EXPECT_EQ(out.json["version"], std::string(version()));
  EXPECT_EQ(out.json["surface"]["id"], "builtin:flat_annulus:r6:l0");
}

TEST(Pipeline, ValidationFailureIsAnAssertion) {
  RunConfig c;
  c.builtin = BuiltinKind::offset_disk;
  c.resolution = 6;
  const auto out = run(Subcommand::report, c);
  EXPECT_EQ(out.exit_code, kExitAssertion);
  EXPECT_FALSE(out.json["pass"].get<bool>());
}

TEST(Pipeline, ModuleErrorsPropagate) {
  RunConfig c;
  c.builtin = BuiltinKind::flat_disk;
  c.ambient = "unit_ball_3,kappa=2";
  EXPECT_THROW(run(Subcommand::topo, c), AmbientError);
  c.ambient = "unit_ball_3";
  c.builtin = BuiltinKind::critical_catenoid;
  c.resolution = 6;
  EXPECT_EQ(run(Subcommand::compare, c).json["result"]["dbar"], nullptr);
}
