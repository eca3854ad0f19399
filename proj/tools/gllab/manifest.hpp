#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gllab::cli {

std::string sha256_hex(const std::string& data);

/// Hash identifying a run's inputs: config text, effective seed, command and
/// tool version. The thread count is left out on purpose.
std::string config_hash(const std::string& config_text, std::uint64_t seed, const std::string& command,
                        const std::string& version);

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string tool_version;
  unsigned threads = 1;
  double wall_time_seconds = 0.0;
  int exit_code = 0;
  std::vector<std::string> outputs;

  void write(const std::filesystem::path& file) const;
};

}  // namespace gllab::cli
