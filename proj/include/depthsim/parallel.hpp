#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace depthsim {

/// Resolves a requested worker count; 0 means one per hardware thread.
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, n) on up to `threads` workers using contiguous
/// chunks. Each index is visited exactly once.
template <class Body>
void parallel_for(int n, unsigned threads, Body&& body) {
  const unsigned workers = std::min<unsigned>(resolve_threads(threads), std::max(1, n));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const int begin = static_cast<int>(static_cast<long long>(n) * w / workers);
    const int end = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
    pool.emplace_back([begin, end, &body] {
      for (int i = begin; i < end; ++i) body(i);
    });
  }
}

}  // namespace depthsim
