#include "manifest.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

namespace gllab::cli {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

std::string config_hash(const std::string& config_text, std::uint64_t seed, const std::string& command,
                        const std::string& version) {
  return sha256_hex(config_text + "\n--seed=" + std::to_string(seed) + "\n--command=" + command +
                    "\n--version=" + version + "\n");
}

void RunManifest::write(const std::filesystem::path& file) const {
  const nlohmann::ordered_json j = {
      {"command", command},
      {"config_hash", config_hash},
      {"seed", seed},
      {"tool_version", tool_version},
      {"threads", threads},
      {"wall_time_seconds", wall_time_seconds},
      {"exit_code", exit_code},
      {"outputs", outputs},
  };
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << j.dump(2) << '\n';
}

}  // namespace gllab::cli
