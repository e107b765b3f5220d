#pragma once

// Data-parallel kernels. Each OpenMP kernel has a serial twin with identical
// arithmetic order per output element, so the two agree bit for bit.

#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <vector>

#include "fermitheta/algebra.hpp"

namespace fermitheta::kernels {

// Thread count: explicit request if positive, else FERMITHETA_THREADS, else
// the OpenMP default.
int resolve_threads(int requested);

// scale * sum_i g_i A_i as a dense matrix.
ComplexMatrix assemble_hamiltonian_serial(std::span<const CompiledPauli> ops, std::span<const double> g, double scale);
ComplexMatrix assemble_hamiltonian_parallel(std::span<const CompiledPauli> ops, std::span<const double> g, double scale,
                                            int threads = 0);

// Anticommutation rows as packed 64-bit words.
using AdjacencyRows = std::vector<std::vector<std::uint64_t>>;
AdjacencyRows adjacency_rows_serial(const OperatorSet& set);
AdjacencyRows adjacency_rows_parallel(const OperatorSet& set, int threads = 0);

// E(b) = sum_mask f[mask] (-1)^{popcount(b & mask)} for all b, in place
// (fast Walsh-Hadamard transform over 2^n entries).
void walsh_hadamard_serial(std::vector<double>& f);
void walsh_hadamard_parallel(std::vector<double>& f, int threads = 0);

// Runs body(i) for i in [0, count). Exceptions are captured and the first is
// rethrown after the loop.
template <typename Body>
void for_each_index_serial(std::size_t count, Body&& body) {
  for (std::size_t i = 0; i < count; ++i) body(i);
}

template <typename Body>
void for_each_index_parallel(std::size_t count, int threads, Body&& body) {
  std::exception_ptr failure;
  std::mutex guard;
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic) num_threads(resolve_threads(threads))
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace fermitheta::kernels
