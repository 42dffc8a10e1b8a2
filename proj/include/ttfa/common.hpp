// common.hpp - shared scalar types, deterministic summation, parallel_for.
//
// Conventions used throughout the library (the "constants sheet"):
//   * complex scalar: std::complex<double>
//   * symplectic form on R^{2n}:  [(x,u),(y,v)] = u.y - v.x
//     with J = [[0, I_n], [-I_n, 0]] this is [xi,eta] = (J xi).eta = -xi.(J eta);
//     the extension to C^{2n} is bilinear (no conjugation): [z,w] = (J z).w.
//   * Fourier transform: fhat(w) = (2pi)^{-d/2} Int f(x) e^{-i x.w} dx
//     (sign = -1 selects this forward transform, +1 the inverse).
//   * All reductions over grids use fixed-shape pairwise summation so serial
//     and parallel runs produce identical results.
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ttfa {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Pairwise (cascade) summation with a fixed base-block size. The reduction
// tree depends only on the length, never on thread count.
namespace detail {
template <typename T>
T pairwise_sum_impl(const T* data, std::size_t n) {
  if (n <= 32) {
    T acc{};
    for (std::size_t i = 0; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}
}  // namespace detail

template <typename T>
T pairwise_sum(std::span<const T> data) {
  if (data.empty()) return T{};
  return detail::pairwise_sum_impl(data.data(), data.size());
}

template <typename T>
T pairwise_sum(const std::vector<T>& data) {
  return pairwise_sum(std::span<const T>(data.data(), data.size()));
}

// Sum f(i) for i in [0, n) through a scratch buffer, pairwise-reduced.
template <typename T, typename F>
T pairwise_sum_terms(std::size_t n, F&& term) {
  std::vector<T> buf(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = term(i);
  return pairwise_sum<T>(buf);
}

// Thread cap: TTFA_THREADS env var, else hardware_concurrency.
unsigned max_threads();

// Splits [0, n) into contiguous chunks, one task per chunk. Tasks must only
// write to disjoint output ranges; any reduction happens on the caller side
// in deterministic index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

// Chunked variant for reductions: the chunk layout depends only on n (never
// on the thread count), so partial results combined in chunk order are
// bit-reproducible under any parallelism.
std::size_t reduction_chunk_count(std::size_t n);
void parallel_for_chunks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

struct ttfa_error : std::runtime_error {
  explicit ttfa_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ttfa
