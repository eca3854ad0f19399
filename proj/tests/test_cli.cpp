#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "gllab/common/error.hpp"
#include "config.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;

namespace gllab::cli {
namespace {

struct RunResult {
  int status = -1;
  std::string output;
};

class CliRun : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("gllab_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  RunResult run(const std::string& command, const fs::path& config, const std::string& extra = "",
                const std::string& out = "out") const {
    const std::string cmd = std::string("\"") + GLLAB_BINARY + "\" " + command + " --config \"" + config.string() +
                            "\" --out \"" + (dir_ / out).string() + "\" " + extra + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    std::array<char, 512> buf{};
    while (pipe && fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
    const int raw = pipe ? pclose(pipe) : -1;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

const char* const kScalarMeasure = R"(
[measure]
dim = 2
family = scaled_rotation
log_scale = discrete
log_scale_values = -1, 1
uniform_rotation = false
)";

const char* const kPairMeasure = R"(
[measure]
dim = 2
family = finite_support
matrix = 2, 1, 1, 1
weight = 0.5
matrix = 1, 1, 0, 1
weight = 0.5
)";

// --------------------------------------------------------------- config

TEST(ConfigFile, SectionsAndRootKeys) {
  const auto cfg = ConfigFile::parse("seed = 3 # inline\n; comment\n[a]\nx = 1, 2,3\n\n[b]\ny = yes\n", "t.ini");
  EXPECT_EQ(cfg.root().get_u64("seed"), 3u);
  EXPECT_EQ(cfg.section("a").get_doubles("x"), (std::vector<double>{1, 2, 3}));
  EXPECT_TRUE(cfg.section("b").get_bool("y", false));
  EXPECT_TRUE(cfg.has_section("a"));
  EXPECT_FALSE(cfg.has_section("c"));
}

TEST(ConfigFile, ErrorsCarryLineNumbers) {
  try {
    ConfigFile::parse("[a]\nx = 1\n[a]\n", "t.ini");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("t.ini:3"), std::string::npos);
  }
  EXPECT_THROW(ConfigFile::parse("[a\n", "t.ini"), ConfigError);
  EXPECT_THROW(ConfigFile::parse("[a]\njunk\n", "t.ini"), ConfigError);
  EXPECT_THROW(ConfigFile::parse("[a]\n= 3\n", "t.ini"), ConfigError);
}

TEST(ConfigSection, MissingBadAndUnknownKeys) {
  const auto cfg = ConfigFile::parse("[s]\nn = ten\nm = 4\nspelling = 1\nd = 1\nd = 2\n", "t.ini");
  const auto& s = cfg.section("s");
  try {
    s.get_size("reps");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("'reps'"), std::string::npos);
  }
  EXPECT_THROW(s.get_size("n"), ConfigError);
  EXPECT_THROW(s.get_double("d"), ConfigError);
  EXPECT_EQ(s.get_size("m"), 4u);
  try {
    s.finish();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("t.ini:4"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("spelling"), std::string::npos);
  }
}

TEST(ConfigSection, Fallbacks) {
  const auto cfg = ConfigFile::parse("[s]\n", "t.ini");
  const auto& s = cfg.section("s");
  EXPECT_EQ(s.get_size("n", 7), 7u);
  EXPECT_EQ(s.get_string("r", "none"), "none");
  EXPECT_FALSE(s.find_double("x").has_value());
  EXPECT_NO_THROW(s.finish());
}

TEST(ParseMeasure, FiniteSupport) {
  const auto cfg = ConfigFile::parse(kPairMeasure, "t.ini");
  const auto spec = parse_measure(cfg.section("measure"));
  EXPECT_EQ(spec.dim, 2u);
  const auto& fs = std::get<FiniteSupport>(spec.family);
  ASSERT_EQ(fs.matrices.size(), 2u);
  EXPECT_DOUBLE_EQ(fs.matrices[0](0, 1), 1.0);
  EXPECT_DOUBLE_EQ(fs.matrices[1](1, 0), 0.0);
}

TEST(ParseMeasure, Rejections) {
  EXPECT_THROW(parse_measure(ConfigFile::parse("[m]\ndim = 2\nfamily = finite_support\nmatrix = 1, 0, 0, 1\n", "t")
                                 .section("m")),
               ConfigError);
  EXPECT_THROW(parse_measure(ConfigFile::parse("[m]\ndim = 2\nfamily = cauchy\n", "t").section("m")), ConfigError);
  EXPECT_THROW(parse_measure(ConfigFile::parse("[m]\ndim = 1\nfamily = gaussian_entries\n", "t").section("m")),
               ConfigError);
}

TEST(ParseBn, ExactlyOneForm) {
  EXPECT_THROW(parse_bn(ConfigFile::parse("[s]\n", "t").section("s")), ConfigError);
  EXPECT_THROW(parse_bn(ConfigFile::parse("[s]\nbn_alpha = 0.5\n", "t").section("s")), ConfigError);
  EXPECT_NEAR(parse_bn(ConfigFile::parse("[s]\nbn_alpha = 0.75\n", "t").section("s"))(16), 8.0, 1e-12);
}

TEST(Manifest, Sha256AndHashInputs) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const auto h = config_hash("x", 1, "tails", "1.0");
  EXPECT_EQ(h.size(), 64u);
  EXPECT_NE(h, config_hash("x", 2, "tails", "1.0"));
  EXPECT_NE(h, config_hash("x", 1, "mdp", "1.0"));
  EXPECT_NE(h, config_hash("y", 1, "tails", "1.0"));
  EXPECT_EQ(h, config_hash("x", 1, "tails", "1.0"));
}

// ----------------------------------------------------------------- runs

TEST_F(CliRun, MissingRequiredKeyNamesIt) {
  const auto cfg = write_config("c.ini", std::string(kScalarMeasure) + "[tails]\nn = 10\ny_grid = 0.5\nlambda = 0\n");
  const auto r = run("tails", cfg);
  EXPECT_EQ(r.status, 2) << r.output;
  EXPECT_NE(r.output.find("'reps'"), std::string::npos) << r.output;
}

TEST_F(CliRun, UnknownKeyRejected) {
  const auto cfg = write_config("c.ini", std::string(kScalarMeasure) + "[lyapunov]\nn = 10\nreps = 10\nrep = 3\n");
  const auto r = run("lyapunov", cfg);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("rep"), std::string::npos);
}

TEST_F(CliRun, VbeOutsideRangeIsDomainError) {
  const auto cfg = write_config("c.ini", "[bounds]\nvbe_p = 2.5\n");
  EXPECT_EQ(run("bounds", cfg).status, 2);
}

TEST_F(CliRun, CentralScaleBnRejected) {
  const auto cfg = write_config("c.ini", "[mdp]\nbn_alpha = 0.5\n");
  const auto r = run("mdp", cfg);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.output.find("bn_alpha"), std::string::npos);
}

TEST_F(CliRun, DecomposeOnlyInDimensionTwo) {
  const auto cfg = write_config("c.ini", "[measure]\ndim = 3\nfamily = gaussian_entries\n[decompose]\n");
  EXPECT_EQ(run("decompose", cfg).status, 2);
}

TEST_F(CliRun, UnsortedYGridRejected) {
  const auto cfg = write_config(
      "c.ini", std::string(kScalarMeasure) + "[tails]\nn = 10\ny_grid = 0.5, 0.2\nreps = 200\nlambda = 0\n");
  EXPECT_EQ(run("tails", cfg).status, 2);
}

TEST_F(CliRun, UnknownCommandAndMissingConfig) {
  const auto cfg = write_config("c.ini", "");
  EXPECT_EQ(run("frobnicate", cfg).status, 2);
  EXPECT_EQ(run("tails", dir_ / "nope.ini").status, 2);
}

TEST_F(CliRun, AllCensoredExitsFour) {
  const auto cfg = write_config("c.ini", std::string(kScalarMeasure) + "[tails]\nn = 10\ny_grid = 5\nreps = 200\n"
                                                                       "lambda = 0\n");
  const auto r = run("tails", cfg);
  EXPECT_EQ(r.status, 4) << r.output;
}

TEST_F(CliRun, LyapunovWritesManifestAndTaggedCsv) {
  const auto cfg = write_config("c.ini", std::string("seed = 9\n") + kPairMeasure +
                                             "[lyapunov]\nn = 100\nreps = 40\nx_grid = 2\n");
  const auto r = run("lyapunov", cfg);
  ASSERT_EQ(r.status, 0) << r.output;
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "out" / "manifest.json"));
  EXPECT_EQ(manifest["command"], "lyapunov");
  EXPECT_EQ(manifest["seed"], 9);
  EXPECT_EQ(manifest["exit_code"], 0);
  const std::string hash = manifest["config_hash"];
  EXPECT_EQ(hash, config_hash(slurp(cfg), 9, "lyapunov", manifest["tool_version"].get<std::string>()));
  std::size_t csvs = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "out")) {
    if (e.path().extension() != ".csv") continue;
    ++csvs;
    const std::string text = slurp(e.path());
    EXPECT_EQ(text.rfind("# manifest " + hash + "\n", 0), 0u) << e.path();
  }
  EXPECT_GE(csvs, 1u);
  const auto result = nlohmann::json::parse(slurp(dir_ / "out" / "lyapunov.json"));
  EXPECT_NEAR(result["lambda_hat"].get<double>(), 0.6, 0.1);
}

TEST_F(CliRun, SeedFlagOverridesConfigAndEnvironment) {
  const auto cfg = write_config("c.ini", std::string("seed = 9\n") + kPairMeasure +
                                             "[lyapunov]\nn = 20\nreps = 10\nvariance = false\n");
  ASSERT_EQ(run("lyapunov", cfg, "--seed 123", "a").status, 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "a" / "manifest.json"))["seed"], 123);
  ASSERT_EQ(setenv("GLLAB_SEED", "77", 1), 0);
  ASSERT_EQ(run("lyapunov", cfg, "", "b").status, 0);
  ASSERT_EQ(run("lyapunov", cfg, "--seed 5", "c").status, 0);
  unsetenv("GLLAB_SEED");
  EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "b" / "manifest.json"))["seed"], 77);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "c" / "manifest.json"))["seed"], 5);
}

TEST_F(CliRun, OutputsIdenticalAcrossThreadCounts) {
  const auto cfg = write_config("c.ini", std::string("seed = 4\n") + kPairMeasure +
                                             "[tails]\nn_schedule = 20, 40\ny_grid = 0.1, 0.2, 0.3, 0.4\n"
                                             "reps = 3000\nx_grid = 4\nlambda = 0.6\nsensitivity = true\n");
  std::vector<std::string> names;
  for (const char* t : {"1", "4", "16"}) {
    const auto r = run("tails", cfg, std::string("--threads ") + t, std::string("t") + t);
    ASSERT_EQ(r.status, 0) << r.output;
  }
  for (const auto& e : fs::directory_iterator(dir_ / "t1")) {
    if (e.path().extension() != ".csv") continue;
    const auto name = e.path().filename();
    const std::string base = slurp(e.path());
    EXPECT_EQ(base, slurp(dir_ / "t4" / name)) << name;
    EXPECT_EQ(base, slurp(dir_ / "t16" / name)) << name;
    names.push_back(name.string());
  }
  EXPECT_FALSE(names.empty());
}

}  // namespace
}  // namespace gllab::cli
