#include "latrule/parallel.hpp"

#include <atomic>

namespace latrule {

namespace {
std::atomic<unsigned> g_limit{0};
}

void set_thread_limit(unsigned n) { g_limit.store(n); }

unsigned thread_limit() {
  unsigned n = g_limit.load();
  if (n != 0) return n;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace latrule
