#include "volnet/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace volnet {

namespace {

std::atomic<std::size_t> g_override{0};

std::size_t env_threads() {
  const char* raw = std::getenv("VOLNET_THREADS");
  if (raw == nullptr) return 0;
  try {
    const long value = std::stol(raw);
    return value > 0 ? static_cast<std::size_t>(value) : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

std::size_t thread_count() {
  if (const std::size_t n = g_override.load(); n > 0) return n;
  if (const std::size_t n = env_threads(); n > 0) return n;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_thread_count(std::size_t n) { g_override.store(n); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace volnet
