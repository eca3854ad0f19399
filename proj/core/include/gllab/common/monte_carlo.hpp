#pragma once

#include <cstdint>

namespace gllab {

/// Seed and worker count for a Monte Carlo estimator. Results depend on the
/// seed only; `threads` affects wall time, never the output.
struct MonteCarlo {
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

}  // namespace gllab
