#include "graphon/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace graphon::par {

namespace {
int g_threads = 0;
}

int thread_count() {
  if (g_threads > 0) return g_threads;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void set_thread_count(int n) { g_threads = n; }

void run_blocks(int blocks, const std::function<void(int)>& f) {
  if (blocks <= 0) return;
  int workers = thread_count();
  if (workers > blocks) workers = blocks;
  if (workers <= 1) {
    for (int b = 0; b < blocks; ++b) f(b);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mutex;
  auto body = [&] {
    for (;;) {
      int b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        f(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int i = 1; i < workers; ++i) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace graphon::par
