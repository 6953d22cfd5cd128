#pragma once

#include <atomic>
#include <exception>
#include <thread>

namespace cgrid {

template <class R>
std::vector<R> parallel_map(std::size_t n, const std::function<R(std::size_t)>& fn, unsigned threads) {
  std::vector<R> out(n);
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errs(n);
  std::atomic<std::size_t> cursor{0};
  auto work = [&] {
    for (std::size_t i; (i = cursor.fetch_add(1)) < n;) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned t = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  for (unsigned k = 0; k < t; ++k) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace cgrid
