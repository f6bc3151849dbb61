#pragma once

#include <algorithm>
#include <thread>

namespace opnorm {

template <class R>
std::vector<R> run_indexed(int n, int threads, const std::function<R(int)>& fn) {
  std::vector<R> out(static_cast<std::size_t>(std::max(n, 0)));
  if (n <= 0) return out;
  const int workers = std::clamp(threads, 1, n);
  if (workers == 1) {
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int i = w; i < n; i += workers) out[static_cast<std::size_t>(i)] = fn(i);
      });
  }
  return out;
}

}  // namespace opnorm
