// Deterministic fan-out over independent work items.
#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace kgen {

/// Thread count from K_GEN_THREADS when set to a positive integer, else `fallback`.
inline int resolve_threads(int fallback) {
  if (const char* env = std::getenv("K_GEN_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1, fallback);
}

/// Evaluates fn(0..count-1) on up to `threads` workers. Results are stored by
/// index, so the output does not depend on scheduling. The first exception
/// (lowest index) is rethrown.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, int threads, F&& fn) {
  std::vector<T> out(count);
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, threads)), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) out[k] = fn(k);
    return out;
  }
  std::vector<std::exception_ptr> errors(count);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < count; k += workers) {
          try {
            out[k] = fn(k);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Pairwise (tree) summation in a fixed order.
template <class T>
T pairwise_sum(std::span<const T> xs) {
  if (xs.empty()) return T{};
  if (xs.size() == 1) return xs[0];
  if (xs.size() <= 8) {
    T s = xs[0];
    for (std::size_t k = 1; k < xs.size(); ++k) s += xs[k];
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& xs) {
  return pairwise_sum(std::span<const T>(xs.data(), xs.size()));
}

}  // namespace kgen
