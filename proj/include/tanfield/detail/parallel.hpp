#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace tanfield::detail {

// Deterministic chunked parallel map-reduce. Work items [0, n) are split
// into fixed-size chunks; chunks are processed by a worker pool and their
// partial results are combined afterwards in chunk order, so the result is
// bit-identical for any worker count (including 1).
//
// body(i, partial) accumulates item i into the chunk-local partial;
// Partial must be default-constructible; combine(total, partial) folds
// partials in index order.
template <typename Partial, typename Body, typename Combine>
Partial parallel_reduce(std::size_t n, Body&& body, Combine&& combine,
                        std::size_t chunk_size = 64,
                        unsigned workers = 0) {
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t n_chunks = (n + chunk_size - 1) / chunk_size;
  std::vector<Partial> partials(n_chunks);
  if (workers == 0) {
    workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
  }
  if (workers > 1 && n_chunks > 1) {
    std::atomic<std::size_t> next{0};
    auto run = [&]() {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        const std::size_t lo = c * chunk_size;
        const std::size_t hi = std::min(n, lo + chunk_size);
        for (std::size_t i = lo; i < hi; ++i) body(i, partials[c]);
      }
    };
    std::vector<std::thread> pool;
    const unsigned used = static_cast<unsigned>(
        std::min<std::size_t>(workers, n_chunks));
    pool.reserve(used);
    for (unsigned w = 0; w < used; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t c = 0; c < n_chunks; ++c) {
      const std::size_t lo = c * chunk_size;
      const std::size_t hi = std::min(n, lo + chunk_size);
      for (std::size_t i = lo; i < hi; ++i) body(i, partials[c]);
    }
  }
  Partial total{};
  for (std::size_t c = 0; c < n_chunks; ++c) combine(total, partials[c]);
  return total;
}

}  // namespace tanfield::detail
