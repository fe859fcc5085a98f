#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace schurdil::detail {

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
/// Each index is visited exactly once; callers write results into per-index
/// slots and reduce afterwards in index order.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  }
}

}  // namespace schurdil::detail
