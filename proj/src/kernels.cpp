#include "fermitheta/kernels.hpp"

#include <bit>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "fermitheta/errors.hpp"

namespace fermitheta::kernels {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FERMITHETA_THREADS"); env != nullptr && *env != '\0') {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
    throw InputError("FERMITHETA_THREADS must be a positive integer");
  }
  return omp_get_max_threads();
}

namespace {

std::size_t common_dim(std::span<const CompiledPauli> ops, std::span<const double> g) {
  if (ops.empty()) throw InputError("Hamiltonian needs at least one term");
  if (ops.size() != g.size()) throw InputError("coefficient count does not match term count");
  for (const auto& op : ops) {
    if (op.dim != ops.front().dim) throw InputError("terms act on different dimensions");
  }
  return ops.front().dim;
}

// Column b of the Hamiltonian: every term maps |b> to a single basis state.
void fill_column(std::span<const CompiledPauli> ops, std::span<const double> g, double scale, std::uint64_t b,
                 ComplexMatrix& h) {
  const auto col = static_cast<Eigen::Index>(b);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& op = ops[i];
    const double sign = (std::popcount(op.z & b) & 1) ? -1.0 : 1.0;
    h(static_cast<Eigen::Index>(b ^ op.x), col) += (scale * g[i] * sign) * op.coeff;
  }
}

std::vector<std::uint64_t> adjacency_row(const OperatorSet& set, std::size_t i) {
  const std::size_t m = set.size();
  std::vector<std::uint64_t> row((m + 63) / 64, 0);
  for (std::size_t j = 0; j < m; ++j) {
    if (j != i && set.anticommutes(i, j)) row[j / 64] |= std::uint64_t{1} << (j % 64);
  }
  return row;
}

void check_power_of_two(const std::vector<double>& f) {
  if (f.empty() || !std::has_single_bit(f.size())) throw InputError("Walsh-Hadamard length must be a power of two");
}

}  // namespace

ComplexMatrix assemble_hamiltonian_serial(std::span<const CompiledPauli> ops, std::span<const double> g, double scale) {
  const std::size_t dim = common_dim(ops, g);
  ComplexMatrix h = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t b = 0; b < dim; ++b) fill_column(ops, g, scale, b, h);
  return h;
}

ComplexMatrix assemble_hamiltonian_parallel(std::span<const CompiledPauli> ops, std::span<const double> g, double scale,
                                            int threads) {
  const std::size_t dim = common_dim(ops, g);
  ComplexMatrix h = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const auto n = static_cast<std::int64_t>(dim);
#pragma omp parallel for schedule(static) num_threads(resolve_threads(threads))
  for (std::int64_t b = 0; b < n; ++b) fill_column(ops, g, scale, static_cast<std::uint64_t>(b), h);
  return h;
}

AdjacencyRows adjacency_rows_serial(const OperatorSet& set) {
  AdjacencyRows rows(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) rows[i] = adjacency_row(set, i);
  return rows;
}

AdjacencyRows adjacency_rows_parallel(const OperatorSet& set, int threads) {
  AdjacencyRows rows(set.size());
  const auto m = static_cast<std::int64_t>(set.size());
#pragma omp parallel for schedule(dynamic, 8) num_threads(resolve_threads(threads))
  for (std::int64_t i = 0; i < m; ++i) rows[static_cast<std::size_t>(i)] = adjacency_row(set, static_cast<std::size_t>(i));
  return rows;
}

void walsh_hadamard_serial(std::vector<double>& f) {
  check_power_of_two(f);
  const std::size_t n = f.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = f[j];
        const double b = f[j + h];
        f[j] = a + b;
        f[j + h] = a - b;
      }
    }
  }
}

void walsh_hadamard_parallel(std::vector<double>& f, int threads) {
  check_power_of_two(f);
  const auto n = static_cast<std::int64_t>(f.size());
  const int nt = resolve_threads(threads);
  double* data = f.data();
#pragma omp parallel num_threads(nt)
  for (std::int64_t h = 1; h < n; h <<= 1) {
    const std::int64_t blocks = n / (2 * h);
    if (blocks >= nt) {
#pragma omp for schedule(static)
      for (std::int64_t b = 0; b < blocks; ++b) {
        for (std::int64_t j = b * 2 * h; j < b * 2 * h + h; ++j) {
          const double a = data[j];
          const double c = data[j + h];
          data[j] = a + c;
          data[j + h] = a - c;
        }
      }
    } else {
      // Few wide blocks: split each block's butterflies instead.
      for (std::int64_t b = 0; b < blocks; ++b) {
#pragma omp for schedule(static)
        for (std::int64_t j = b * 2 * h; j < b * 2 * h + h; ++j) {
          const double a = data[j];
          const double c = data[j + h];
          data[j] = a + c;
          data[j + h] = a - c;
        }
      }
    }
  }
}

}  // namespace fermitheta::kernels
