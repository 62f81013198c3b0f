#pragma once

#include <cstdlib>
#include <string>
#include <thread>

namespace aoi {

// Worker count for parallel sections: an explicit request wins, otherwise the
// AOI_THREADS environment variable, otherwise hardware concurrency.
inline int worker_count(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("AOI_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace aoi
