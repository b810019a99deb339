#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace ranksense {

/// Generator for one resample. Its state depends only on (seed, index), so
/// the draws do not depend on which worker runs the resample or when.
class ResampleRng {
 public:
  ResampleRng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    engine_.seed(seq);
  }

  /// Uniform integer in [0, n). Rejection sampling keeps the mapping from
  /// engine output to draws fixed across standard library implementations.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

/// `n` case indices drawn with replacement.
inline std::vector<std::size_t> bootstrap_draw(std::size_t n, std::uint64_t seed, std::uint64_t index) {
  ResampleRng rng(seed, index);
  std::vector<std::size_t> draw(n);
  for (auto& c : draw) c = static_cast<std::size_t>(rng.below(n));
  return draw;
}

inline double distinct_fraction(std::vector<std::size_t> draw, std::size_t n) {
  std::sort(draw.begin(), draw.end());
  return static_cast<double>(std::unique(draw.begin(), draw.end()) - draw.begin()) /
         static_cast<double>(n);
}

/// Runs body(i) for i in [0, count) on `threads` workers (0 = hardware
/// concurrency). The first exception thrown by any body is rethrown.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ranksense
