#pragma once

// shared plumbing: logging controlled by the BMDP_LOG environment variable,
// byte hashing for instance identifiers, a wall-clock stopwatch, and a
// deterministic parallel-for.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <iostream>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace bmdp {

// verbosity: 0 = quiet (default), 1 = info, 2 = debug.
// BMDP_LOG accepts the numeric level or the names "info" / "debug".
inline int log_level() {
  static const int level = [] {
    const char* env = std::getenv("BMDP_LOG");
    if (env == nullptr) return 0;
    const std::string_view v(env);
    if (v == "debug" || v == "2") return 2;
    if (v == "info" || v == "1") return 1;
    return 0;
  }();
  return level;
}

inline void log_line(int level, const std::string& msg) {
  if (log_level() >= level) std::cerr << "[bmdp] " << msg << '\n';
}

// fnv-1a 64-bit hash over raw bytes
inline std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ull;
  }
  return h;
}

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

// runs fn(i) for every i in [0, count).  with jobs <= 1 this is a plain
// loop; otherwise contiguous blocks go to worker threads.  callers must
// write only to their own slot i, which keeps the outcome independent of
// the worker count.
inline void parallel_for(int jobs, std::size_t count,
                         const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = count * w / workers;
        const std::size_t hi = count * (w + 1) / workers;
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace bmdp
