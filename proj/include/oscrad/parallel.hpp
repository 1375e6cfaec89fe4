#ifndef OSCRAD_PARALLEL_HPP
#define OSCRAD_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace oscrad {

// Index-parallel map with deterministic, in-order gather.  Each element is
// computed independently, so the result does not depend on the thread count.
template <typename R>
std::vector<R> parallel_map(size_t n, const std::function<R(size_t)>& fn) {
  std::vector<R> out(n);
  if (n == 0) return out;
  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 2;
  workers = std::min<unsigned>(workers, unsigned(n));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (size_t i = w; i < n; i += workers) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace oscrad

#endif
