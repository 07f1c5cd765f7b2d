#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "shelab/runner.hpp"

using namespace shelab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "shelab_runner_test" / name;
  fs::remove_all(dir);
  return dir;
}

runner::RunResult run_text(const std::string& text, const fs::path& dir, unsigned workers = 1) {
  runner::RunOptions opt;
  opt.workers = workers;
  opt.output_dir = dir;
  return runner::run(config::validate_text(text), opt);
}

int cli(const std::string& args) {
  const std::string cmd = std::string(SHELAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

const char* kMoments =
    "[moments]\n"
    "lip = 1\n"
    "n_points = 32\n"
    "dt = 0.002\n"
    "horizon = 0.2\n"
    "output_stride = 5\n"
    "p_list = 2, 4\n"
    "n_replicas = 100\n"
    "master_seed = 11\n";

}  // namespace

TEST(Runner, UpsilonArtifactsAndManifest) {
  const auto dir = scratch("upsilon");
  const auto r = run_text("[upsilon]\nbeta = 2, 8\ninverse = 0.25\n", dir);
  EXPECT_EQ(r.exit_code, 0);
  ASSERT_EQ(r.summary.size(), 3u);
  EXPECT_EQ(r.summary[0], "upsilon(2) = 0.25");
  EXPECT_TRUE(fs::exists(dir / "upsilon.csv"));
  EXPECT_TRUE(fs::exists(dir / "upsilon_inverse.csv"));
  const auto m = nlohmann::json::parse(io::read_file(dir / "manifest.json"));
  EXPECT_EQ(m.at("command"), "upsilon");
  EXPECT_EQ(m.at("schema_version"), io::kManifestSchemaVersion);
  EXPECT_TRUE(m.at("master_seed").is_null());
  EXPECT_EQ(m.at("library_version"), SHELAB_VERSION);
  EXPECT_EQ(m.at("files").size(), 2u);
  const auto csv = io::read_file(dir / "upsilon.csv");
  EXPECT_EQ(m.at("files")[0].at("fnv1a"), io::hex64(io::fnv1a(csv)));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "beta,upsilon");
}

TEST(Runner, MomentRunsAreByteIdenticalAcrossWorkersAndReruns) {
  const auto d1 = scratch("w1"), d3 = scratch("w3"), dm = scratch("manifest");
  const auto a = run_text(kMoments, d1, 1);
  const auto b = run_text(kMoments, d3, 3);
  runner::RunOptions opt;
  opt.output_dir = dm;
  opt.workers = 2;
  const auto c = runner::run(runner::config_from_manifest(d1 / "manifest.json"), opt);
  ASSERT_EQ(a.files.size(), 3u);
  for (const auto& f : a.files) {
    const auto ref = io::read_file(d1 / f.name);
    EXPECT_EQ(ref, io::read_file(d3 / f.name)) << f.name;
    EXPECT_EQ(ref, io::read_file(dm / f.name)) << f.name;
  }
  EXPECT_EQ(a.manifest.at("config_hash"), c.manifest.at("config_hash"));
  EXPECT_EQ(a.manifest.at("master_seed"), 11);
  EXPECT_EQ(b.manifest.at("workers"), 3);
}

TEST(Runner, BoundsJsonIsWritten) {
  const auto dir = scratch("bounds");
  const std::string text = std::string(kMoments).replace(0, 10, "[bounds]\n") + "l_sigma = 1\nz_p = 1\n";
  run_text(text, dir);
  const auto j = nlohmann::json::parse(io::read_file(dir / "bounds.json"));
  ASSERT_EQ(j.size(), 2u);
  const auto rep = bound_report_from_json(j[0]);
  EXPECT_EQ(rep.p, 2);
  // Q = z_p * 2 * lip = 2, upper = Q^4 / 8 for alpha = 2.
  EXPECT_NEAR(rep.upper_bound, 2.0, 1e-6);
  ASSERT_TRUE(rep.lower_bound);
  EXPECT_FALSE(bound_report_from_json(j[1]).lower_bound);
}

TEST(Runner, OutputDirectoryPrecedence) {
  const auto cfg = config::validate_text("[upsilon]\nbeta = 1\noutput_dir = from_config\n");
  runner::RunOptions opt;
  EXPECT_EQ(runner::resolve_output_dir(cfg, opt), fs::path("from_config"));
  opt.output_dir = "from_option";
  EXPECT_EQ(runner::resolve_output_dir(cfg, opt), fs::path("from_option"));
  const auto bare = config::validate_text("[upsilon]\nbeta = 1\n");
  ::setenv("SHELAB_OUTPUT_DIR", "from_env", 1);
  EXPECT_EQ(runner::resolve_output_dir(bare, {}), fs::path("from_env"));
  ::unsetenv("SHELAB_OUTPUT_DIR");
  EXPECT_EQ(runner::resolve_output_dir(bare, {}), fs::path("shelab_out"));
}

TEST(Runner, ConfigFromNonManifestFails) {
  const auto dir = scratch("notmanifest");
  fs::create_directories(dir);
  io::write_atomic(dir / "x.json", "{\"a\": 1}");
  EXPECT_THROW(runner::config_from_manifest(dir / "x.json"), ConfigError);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  EXPECT_EQ(cli("--output-dir " + (dir / "ok").string() + " upsilon --beta 2"), 0);
  EXPECT_EQ(cli("--output-dir " + (dir / "bad").string() + " upsilon --alpha 0.9 --beta 2"), 2);
  EXPECT_EQ(cli("--output-dir " + (dir / "bad").string() + " upsilon --alpha 2"), 2);
  EXPECT_EQ(cli("--no-such-flag"), 2);
  EXPECT_EQ(cli("run " + (dir / "missing.ini").string()), 3);

  fs::create_directories(dir);
  io::write_atomic(dir / "blow.ini",
                   "[moments]\nlip = 1e6\nn_points = 16\ndt = 0.01\nhorizon = 1\nn_replicas = 100\nmaster_seed = 1\n");
  EXPECT_EQ(cli("--output-dir " + (dir / "blow").string() + " run " + (dir / "blow.ini").string()), 4);
  io::write_atomic(dir / "bad.ini", "[moments]\nalpha = 3\nmaster_seed = 1\n");
  EXPECT_EQ(cli("validate " + (dir / "bad.ini").string()), 2);
}

TEST(Cli, ManifestRerunReproducesArtifacts) {
  const auto dir = scratch("cli_rerun");
  ASSERT_EQ(cli("--workers 1 --output-dir " + (dir / "a").string() +
                " martingale --paths 2000 --master_seed 5"),
            0);
  ASSERT_EQ(cli("--workers 3 --output-dir " + (dir / "b").string() + " run " + (dir / "a" / "manifest.json").string()),
            0);
  for (const char* f : {"series.csv", "martingale.csv"})
    EXPECT_EQ(io::read_file(dir / "a" / f), io::read_file(dir / "b" / f)) << f;
}

TEST(Cli, EnvironmentOutputDirectory) {
  const auto dir = scratch("cli_env");
  const std::string cmd = "SHELAB_OUTPUT_DIR=" + dir.string() + " " + SHELAB_CLI_PATH +
                          " renewal --t_max 2 > /dev/null 2>&1";
  ASSERT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 0);
  EXPECT_TRUE(fs::exists(dir / "renewal.csv"));
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
}
