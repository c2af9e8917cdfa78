#include "vertex_expand/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace vertex_expand {

unsigned thread_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VERTEX_EXPAND_THREADS")) {
    try {
      long cap = std::stol(env);
      if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // malformed value: ignore the cap
    }
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  constexpr std::size_t kMinBlock = 256;
  const std::size_t workers =
      std::min<std::size_t>(thread_count(), (n + kMinBlock - 1) / kMinBlock);
  if (workers <= 1) {
    if (n > 0) body(0, n);
    return;
  }
  const std::size_t block = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * block;
    const std::size_t end = std::min(n, begin + block);
    if (begin < end) pool.emplace_back(body, begin, end);
  }
  body(0, std::min(n, block));
  for (auto& t : pool) t.join();
}

}  // namespace vertex_expand
