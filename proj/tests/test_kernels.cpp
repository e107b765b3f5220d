#include "doctest.h"

#include <bit>
#include <cstdlib>
#include <random>
#include <stdexcept>

#include "fermitheta/kernels.hpp"

using namespace fermitheta;

TEST_CASE("Walsh-Hadamard transform against the defining sum") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> f(64);
  for (auto& v : f) v = u(rng);
  std::vector<double> brute(64, 0.0);
  for (std::size_t b = 0; b < 64; ++b)
    for (std::size_t m = 0; m < 64; ++m) brute[b] += f[m] * ((std::popcount(b & m) % 2) ? -1.0 : 1.0);
  auto s = f;
  auto p = f;
  kernels::walsh_hadamard_serial(s);
  kernels::walsh_hadamard_parallel(p, 2);
  for (std::size_t b = 0; b < 64; ++b) CHECK(std::abs(s[b] - brute[b]) < 1e-12);
  CHECK(s == p);
}

TEST_CASE("thread resolution") {
  CHECK(kernels::resolve_threads(3) == 3);
  setenv("FERMITHETA_THREADS", "2", 1);
  CHECK(kernels::resolve_threads(0) == 2);
  unsetenv("FERMITHETA_THREADS");
  CHECK(kernels::resolve_threads(0) >= 1);
}

TEST_CASE("index loops visit everything and propagate failures") {
  std::vector<int> hits(100, 0);
  kernels::for_each_index_parallel(100, 2, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  std::vector<int> serial(100, 0);
  kernels::for_each_index_serial(100, [&](std::size_t i) { serial[i] += 1; });
  CHECK(serial == hits);
  CHECK_THROWS_AS(kernels::for_each_index_parallel(10, 2,
                                                   [](std::size_t i) {
                                                     if (i == 7) throw std::runtime_error("boom");
                                                   }),
                  std::runtime_error);
}
