#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "gllab/cocycle/cocycle_spec.hpp"
#include "gllab/common/error.hpp"
#include "manifest.hpp"

#ifndef GLLAB_VERSION
#define GLLAB_VERSION "0.0.0"
#endif

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kNumeric = 3, kRange = 4 };

std::uint64_t parse_seed(const std::string& text, const std::string& origin) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-') {
    throw gllab::cli::ConfigError(origin + ": seed must be a non-negative integer, got '" + text + "'");
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gllab::cli;

  CLI::App app{"gllab: experiments on random matrix products"};
  app.set_version_flag("--version", std::string(GLLAB_VERSION));
  std::string command;
  std::string config_path;
  std::optional<std::string> seed_flag;
  std::optional<unsigned> threads_flag;
  std::string out_dir = "gllab_out";
  app.add_option("command", command, "lyapunov | tails | bounds | mdp | decompose | check-measure")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("--config", config_path, "experiment config file")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", seed_flag, "master seed (overrides GLLAB_SEED and the config)");
  app.add_option("--threads", threads_flag, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--out", out_dir, "output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    const ConfigFile config = ConfigFile::load(config_path);
    const ConfigSection& root = config.root();

    std::uint64_t seed = root.has("seed") ? root.get_u64("seed") : 0;
    if (seed_flag) {
      seed = parse_seed(*seed_flag, "--seed");
    } else if (const char* env = std::getenv("GLLAB_SEED"); env != nullptr && *env != '\0') {
      seed = parse_seed(env, "GLLAB_SEED");
    }
    unsigned threads = 1;
    if (root.has("threads")) {
      const std::size_t t = root.get_size("threads");
      if (t == 0 || t > 1024) root.fail("threads", "must lie in [1, 1024]");
      threads = static_cast<unsigned>(t);
    }
    if (threads_flag) threads = *threads_flag;
    if (root.has("cocycle")) {
      try {
        (void)gllab::CocycleSpec::by_label(root.get_string("cocycle"));
      } catch (const gllab::DomainError& e) {
        root.fail("cocycle", e.what());
      }
    }
    root.finish();

    const std::string hash = config_hash(config.text(), seed, command, GLLAB_VERSION);
    RunContext ctx(config, command, seed, threads, out_dir, hash);
    const int status = find_command(command)(ctx);

    RunManifest manifest;
    manifest.command = command;
    manifest.config_hash = hash;
    manifest.seed = seed;
    manifest.tool_version = GLLAB_VERSION;
    manifest.threads = threads;
    manifest.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    manifest.exit_code = status;
    manifest.outputs = ctx.outputs();
    manifest.write(std::filesystem::path(out_dir) / "manifest.json");
    if (status == kRange) std::cerr << "gllab: every estimate is censored (no exceedances observed)\n";
    return status;
  } catch (const ConfigError& e) {
    std::cerr << "gllab: config error: " << e.what() << '\n';
    return kConfig;
  } catch (const gllab::InvariantError& e) {
    std::cerr << "gllab: invariant error: " << e.what() << '\n';
    return kConfig;
  } catch (const gllab::DomainError& e) {
    std::cerr << "gllab: domain error: " << e.what() << '\n';
    return kConfig;
  } catch (const gllab::UnsupportedError& e) {
    std::cerr << "gllab: unsupported: " << e.what() << '\n';
    return kConfig;
  } catch (const gllab::NumericError& e) {
    std::cerr << "gllab: numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const gllab::RangeError& e) {
    std::cerr << "gllab: range error: " << e.what() << '\n';
    return kRange;
  } catch (const std::exception& e) {
    std::cerr << "gllab: error: " << e.what() << '\n';
    return kFailure;
  }
}
