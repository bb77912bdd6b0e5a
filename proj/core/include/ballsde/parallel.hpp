#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace ballsde {

/// Paths per reduction block. Block boundaries depend only on the path count,
/// never on the thread count.
inline constexpr std::size_t kReductionBlock = 64;

inline unsigned resolve_threads(unsigned requested) noexcept {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs per_path(i, acc) for i in [0, count) and merges the results.
/// Each block of kReductionBlock consecutive paths accumulates sequentially
/// into its own make() accumulator; blocks are then merged by a balanced
/// binary tree whose shape depends only on the block count. The result is
/// therefore bit-identical for every thread count.
template <class Acc, class Make, class PerPath, class Combine>
Acc deterministic_reduce(std::size_t count, unsigned threads, Make make, PerPath per_path, Combine combine) {
  const std::size_t blocks = (count + kReductionBlock - 1) / kReductionBlock;
  if (blocks == 0) return make();

  std::vector<std::optional<Acc>> partial(blocks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        Acc acc = make();
        const std::size_t end = std::min(count, (b + 1) * kReductionBlock);
        for (std::size_t i = b * kReductionBlock; i < end; ++i) per_path(i, acc);
        partial[b].emplace(std::move(acc));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
        return;
      }
    }
  };

  const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), blocks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  auto tree = [&](auto&& self, std::size_t lo, std::size_t hi) -> Acc {
    if (hi - lo == 1) return std::move(*partial[lo]);
    const std::size_t mid = lo + (hi - lo) / 2;
    Acc left = self(self, lo, mid);
    combine(left, self(self, mid, hi));
    return left;
  };
  return tree(tree, 0, blocks);
}

}  // namespace ballsde
