#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace sparsebound {

// Worker count for data-parallel loops: SPARSEBOUND_THREADS when set,
// otherwise the hardware concurrency.
inline int worker_count() {
  if (const char* env = std::getenv("SPARSEBOUND_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? int(hw) : 1;
}

inline std::size_t chunk_count(std::size_t n) {
  return std::min(n, std::size_t(worker_count()));
}

// Split [0, n) into chunk_count(n) contiguous chunks and run
// fn(chunk_index, begin, end) on worker threads. Callers keep per-chunk
// accumulators and merge them in chunk order, which keeps reductions
// deterministic.
template <class Fn>
std::size_t run_chunked(std::size_t n, Fn&& fn) {
  std::size_t chunks = chunk_count(n);
  if (chunks <= 1) {
    if (n) fn(std::size_t(0), std::size_t(0), n);
    return n ? 1 : 0;
  }
  std::vector<std::thread> pool;
  std::size_t per = n / chunks, extra = n % chunks;
  std::size_t begin = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    std::size_t len = per + (c < extra ? 1 : 0);
    pool.emplace_back([&fn, c, begin, len] { fn(c, begin, begin + len); });
    begin += len;
  }
  for (std::thread& t : pool) t.join();
  return chunks;
}

}  // namespace sparsebound
