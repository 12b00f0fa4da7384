#include "nematicflow/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace nematicflow {

namespace {
std::atomic<int> g_threads{1};
constexpr std::size_t kMinChunk = 4096;
}  // namespace

void set_thread_count(int n) { g_threads = std::max(1, n); }
int thread_count() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(g_threads.load());
  if (workers <= 1 || n < 2 * kMinChunk) {
    body(0, n);
    return;
  }
  const std::size_t chunks = std::min(workers, n / kMinChunk);
  const std::size_t step = (n + chunks - 1) / chunks;
  std::vector<std::thread> pool;
  pool.reserve(chunks - 1);
  for (std::size_t c = 1; c < chunks; ++c) {
    const std::size_t lo = c * step;
    const std::size_t hi = std::min(n, lo + step);
    if (lo < hi) pool.emplace_back(body, lo, hi);
  }
  body(0, std::min(n, step));
  for (auto& t : pool) t.join();
}

}  // namespace nematicflow
