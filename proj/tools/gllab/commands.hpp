#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "gllab/common/csv.hpp"
#include "gllab/common/monte_carlo.hpp"

namespace gllab::cli {

/// Everything a command needs besides its own config section.
class RunContext {
 public:
  RunContext(const ConfigFile& config, std::string command, std::uint64_t seed, unsigned threads,
             std::filesystem::path out_dir, std::string manifest_hash);

  const ConfigFile& config() const noexcept { return *config_; }
  const std::string& command() const noexcept { return command_; }
  std::uint64_t seed() const noexcept { return seed_; }
  unsigned threads() const noexcept { return threads_; }
  /// Monte Carlo settings for a sub-experiment; `salt` separates the
  /// random streams of different experiments within one run.
  MonteCarlo mc(std::uint64_t salt = 0) const;

  /// Writes `name` in the output directory: manifest comment, then `body`.
  void write_csv(const std::string& name, const std::function<void(CsvWriter&)>& body);
  void write_json(const std::string& name, const nlohmann::ordered_json& value);

  const std::vector<std::string>& outputs() const noexcept { return outputs_; }

 private:
  std::ofstream open(const std::string& name);

  const ConfigFile* config_;
  std::string command_;
  std::uint64_t seed_;
  unsigned threads_;
  std::filesystem::path out_dir_;
  std::string manifest_hash_;
  std::vector<std::string> outputs_;
};

/// Exit code of a finished command: 0, or 4 when every estimate is censored.
using Command = std::function<int(RunContext&)>;

int cmd_lyapunov(RunContext& ctx);
int cmd_tails(RunContext& ctx);
int cmd_bounds(RunContext& ctx);
int cmd_mdp(RunContext& ctx);
int cmd_decompose(RunContext& ctx);
int cmd_check_measure(RunContext& ctx);

/// Command by name; empty function for an unknown name.
Command find_command(const std::string& name);
const std::vector<std::string>& command_names();

}  // namespace gllab::cli
