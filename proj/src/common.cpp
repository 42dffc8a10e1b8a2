#include "ttfa/common.hpp"

#include <algorithm>
#include <cstdlib>

namespace ttfa {

unsigned max_threads() {
  static const unsigned cap = [] {
    if (const char* env = std::getenv("TTFA_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
  }();
  return cap;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  const unsigned nt = std::min<std::size_t>(max_threads(), n);
  if (nt <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t chunk = (n + nt - 1) / nt;
  for (unsigned t = 0; t < nt; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

namespace {
constexpr std::size_t kReductionChunk = 4096;
}

std::size_t reduction_chunk_count(std::size_t n) {
  return n == 0 ? 0 : (n + kReductionChunk - 1) / kReductionChunk;
}

void parallel_for_chunks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  const std::size_t nchunks = reduction_chunk_count(n);
  parallel_for(nchunks, [&](std::size_t clo, std::size_t chi) {
    for (std::size_t c = clo; c < chi; ++c)
      body(c, c * kReductionChunk, std::min(n, (c + 1) * kReductionChunk));
  });
}

}  // namespace ttfa
