#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct Result {
  int code;
  std::string out;
};

Result fbms(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " FBMS_CLI_PATH " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, IndexOfTheFlatDisk) {
  const auto r = fbms("index --builtin flat_disk --resolution 16 --form area");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("index 1 nullity 2"), std::string::npos) << r.out;
}

TEST(Cli, TopoOfTheCatenoid) {
  const auto r = fbms("topo --builtin critical_catenoid --json");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["result"]["topology"]["genus"], 0);
  EXPECT_EQ(j["result"]["topology"]["boundary_count"], 2);
  EXPECT_EQ(j["result"]["topology"]["euler_char"], 0);
  EXPECT_EQ(j["result"]["upsilon"], 1);
}

TEST(Cli, TiltedDiskReportFailsValidation) {
  const auto r = fbms("report --builtin offset_disk");
  EXPECT_EQ(r.code, 2) << r.out;
  EXPECT_NE(r.out.find("FAILED: free_boundary"), std::string::npos);
}

TEST(Cli, Errors) {
  auto r = fbms("topo");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("topo: ConfigError"), std::string::npos) << r.out;
  r = fbms("index --builtin flat_disk --form volume");
  EXPECT_EQ(r.code, 1);
  r = fbms("index --builtin flat_disk --t-grid 1,2");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("--t-grid"), std::string::npos);
  r = fbms("index --mesh /nonexistent.off");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("index: ParseError"), std::string::npos) << r.out;
  r = fbms("explode --builtin flat_disk");
  EXPECT_EQ(r.code, 1);
  r = fbms("index --builtin flat_disk --bogus");
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, ConfigFileAndOverrides) {
  const auto dir = std::filesystem::temp_directory_path() / "fbms_cli_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "cfg.json") << R"({"builtin": "flat_annulus", "resolution": 5})";
  }
  const auto r = fbms("topo --json --config " + (dir / "cfg.json").string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(nlohmann::json::parse(r.out)["surface"]["id"], "builtin:flat_annulus:r5:l0");
  const auto o = fbms("topo --json --config " + (dir / "cfg.json").string() + " --builtin flat_disk");
  ASSERT_EQ(o.code, 0) << o.out;
  EXPECT_EQ(nlohmann::json::parse(o.out)["surface"]["id"], "builtin:flat_disk:r5:l0");
  std::filesystem::remove_all(dir);
}

TEST(Cli, HeatWritesJsonAndCsv) {
  const auto dir = std::filesystem::temp_directory_path() / "fbms_cli_heat";
  std::filesystem::create_directories(dir);
  const auto r = fbms("heat --builtin flat_disk --resolution 3 --t-grid 0.01,10,6 --out " + (dir / "h.json").string());
  EXPECT_TRUE(r.code == 0 || r.code == 2) << r.out;
  const auto j = nlohmann::json::parse(slurp(dir / "h.json"));
  EXPECT_EQ(j["subcommand"], "heat");
  EXPECT_EQ(j["result"]["t_grid"].size(), 6u);
  EXPECT_EQ(j["config"]["t_grid"]["count"], 6);
  std::istringstream csv(slurp(dir / "h.csv"));
  int lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  EXPECT_EQ(lines, 7);
  std::filesystem::remove_all(dir);
}

TEST(Cli, ArtifactsDoNotDependOnThreadCount) {
  for (const std::string args : {"heat --builtin flat_disk --resolution 4 --json",
                                 "sobolev --builtin critical_catenoid --resolution 10 --samples 20 --json",
                                 "index --builtin critical_catenoid --resolution 12 --form all --json"}) {
    const auto one = fbms(args, "FBMS_THREADS=1");
    const auto four = fbms(args, "FBMS_THREADS=4");
    EXPECT_EQ(one.code, four.code);
    EXPECT_EQ(one.out, four.out) << args;
    EXPECT_NE(one.out.find("config_hash"), std::string::npos);
  }
}
