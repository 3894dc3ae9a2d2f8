#include "distreg/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace distreg {

namespace {

int detect_default() {
  if (const char* env = std::getenv("DISTREG_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int>& thread_setting() {
  static std::atomic<int> value{detect_default()};
  return value;
}

thread_local bool inside_parallel_region = false;

}  // namespace

int max_threads() { return thread_setting().load(); }

void set_max_threads(int n) { thread_setting().store(n >= 1 ? n : detect_default()); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const int setting = max_threads();
  if (inside_parallel_region || setting <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(setting), count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto body = [&]() {
    inside_parallel_region = true;
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 0; t + 1 < workers; ++t) pool.emplace_back(body);
  const bool was_inside = inside_parallel_region;
  body();
  inside_parallel_region = was_inside;
  for (auto& th : pool) th.join();

  if (error) std::rethrow_exception(error);
}

}  // namespace distreg
