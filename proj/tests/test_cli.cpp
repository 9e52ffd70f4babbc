#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
  const fs::path d = fs::temp_directory_path() / "blowup_test_cli";
  fs::create_directories(d);
  return d;
}

int run(const std::string& args) {
  const std::string cmd = std::string(BLOWUP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream is(p);
  return nlohmann::json::parse(is);
}

}  // namespace

TEST(Cli, VerifyWritesReportAndSummary) {
  const fs::path out = work_dir() / "verify";
  fs::remove_all(out);
  ASSERT_EQ(run("verify --alpha 0.1 --grid 64,16 --samples 5 --suite hardy_weight --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "report.jsonl"));
  EXPECT_TRUE(fs::exists(out / "summary.json"));
  EXPECT_TRUE(fs::exists(out / "summary.txt"));
  const auto meta = read_json(out / "meta.json");
  EXPECT_DOUBLE_EQ(meta.at("config").at("alpha").get<double>(), 0.1);
}

TEST(Cli, ConfigFileOverridesFlags) {
  const fs::path d = work_dir();
  const fs::path cfg = d / "cfg.json";
  const fs::path out = d / "cfg_out";
  fs::remove_all(out);
  std::ofstream(cfg) << R"({"alpha": 0.2, "grid": [64, 16], "out": ")" << out.string() << R"("})";
  ASSERT_EQ(run("elliptic-solve --alpha 0.1 --config " + cfg.string()), 0);
  const auto meta = read_json(out / "meta.json");
  EXPECT_DOUBLE_EQ(meta.at("config").at("alpha").get<double>(), 0.2);
  EXPECT_EQ(meta.at("config").at("grid"), nlohmann::json::array({64, 16}));
}

TEST(Cli, ConfigurationErrorsExitWithTwo) {
  const fs::path d = work_dir();
  EXPECT_EQ(run("relax --alpha 0.5 --out " + (d / "bad_alpha").string()), 2);
  EXPECT_EQ(run("verify --suite nonsense --out " + (d / "bad_suite").string()), 2);
  const fs::path cfg = d / "bad_key.json";
  std::ofstream(cfg) << R"({"alpah": 0.1})";
  EXPECT_EQ(run("relax --config " + cfg.string() + " --out " + (d / "bad_key").string()), 2);
  EXPECT_EQ(run("toy --model ode --epsilon 0.5 --out " + (d / "bad_eps").string()), 2);
}

TEST(Cli, FundamentalModelRunMatchesClosedForm) {
  const fs::path out = work_dir() / "fm";
  fs::remove_all(out);
  ASSERT_EQ(run("fm-evolve --grid 256,16 --dt 1e-4 --out " + out.string()), 0);
  const auto s = read_json(out / "summary.json");
  EXPECT_LT(s.at("max_relative_error").get<double>(), 1e-6);
  // L12(f0)(0) is 9 pi / 16 up to the radial truncation.
  EXPECT_NEAR(s.at("blowup_time").get<double>(), 32.0 / (9.0 * M_PI), 1e-3);
  EXPECT_TRUE(fs::exists(out / "field.bin"));
  EXPECT_TRUE(fs::exists(out / "fm_history.csv"));
}

TEST(Cli, MissingSubcommandFails) { EXPECT_NE(run(""), 0); }
