#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace toboggan {

/// Worker count: TOBOGGAN_THREADS if set (>= 1), else hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("TOBOGGAN_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// out[i] = f(in[i]); results are positioned by index, so the output does
/// not depend on scheduling. The first exception (lowest index) is rethrown.
template <class T, class F>
auto parallel_map(const std::vector<T>& in, F&& f) -> std::vector<decltype(f(in[0]))> {
  using R = decltype(f(in[0]));
  std::vector<R> out(in.size());
  std::vector<std::exception_ptr> errors(in.size());
  const unsigned workers = std::min<std::size_t>(thread_count(), in.size());
  auto work = [&](unsigned id) {
    for (std::size_t i = id; i < in.size(); i += workers) {
      try {
        out[i] = f(in[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace toboggan
