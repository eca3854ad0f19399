#pragma once

#include <cstdint>
#include <random>

namespace gllab {

using Engine = std::mt19937_64;

/// Mixes a master seed and a stream id into an engine seed. Distinct stream
/// ids map to well separated seeds.
std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t stream_id) noexcept;

/// One reproducible random stream, identified by (master_seed, stream_id).
/// A trajectory owns its stream, so results never depend on scheduling.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : master_seed_(master_seed),
        stream_id_(stream_id),
        engine_(mix_seed(master_seed, stream_id)) {}

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  Engine& engine() noexcept { return engine_; }

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open_zero() { return 1.0 - uniform(); }
  double normal(double mean = 0.0, double sd = 1.0);

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  Engine engine_;
};

}  // namespace gllab
