#pragma once

#include <cstddef>
#include <functional>

namespace gllab {

/// Work is split into chunks whose boundaries depend only on (count, chunk);
/// threads pick chunks dynamically. Callers store per-chunk results and
/// reduce them in chunk order, which makes every reduction independent of
/// the thread count.
struct ChunkRange {
  std::size_t index;
  std::size_t begin;
  std::size_t end;
};

void for_each_chunk(std::size_t count, std::size_t chunk, unsigned threads,
                    const std::function<void(const ChunkRange&)>& body);

inline std::size_t chunk_count(std::size_t count, std::size_t chunk) {
  return chunk == 0 ? 0 : (count + chunk - 1) / chunk;
}

}  // namespace gllab
