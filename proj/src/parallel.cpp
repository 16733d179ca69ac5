#include "rcm/parallel.hpp"

#include <atomic>

namespace rcm::par {

namespace {
std::atomic<int> g_threads{1};
}

void set_threads(int t) { g_threads.store(t < 1 ? 1 : t); }
int threads() { return g_threads.load(); }

}  // namespace rcm::par
