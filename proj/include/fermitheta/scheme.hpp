#pragma once

#include <cstdint>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "fermitheta/algebra.hpp"

namespace fermitheta {

inline constexpr std::uint64_t kMaxJohnsonVertices = 2000;

mpz_class binomial_mpz(long a, long b);  // 0 when b < 0 or a < b

// sum_{j=0}^{d} (-1)^{d-j} C(r-j, d-j) C(r-x, j) C(m-r+j-x, j)
mpz_class dual_hahn(int m, int r, int d, int x);

struct HahnTable {
  int m;
  int r;
  std::vector<std::vector<mpz_class>> values;  // [d][x], d, x in 0..r
};
HahnTable hahn_table(int m, int r);

// Dimension of the x-th common eigenspace of J(m, r): C(m,x) - C(m,x-1) for
// x <= min(r, m-r), zero beyond.
std::uint64_t johnson_multiplicity(int m, int r, int x);

// 0/1 matrix over lexicographic r-subsets of [m]; (S,T) adjacent iff r - |S & T| = d.
RealMatrix johnson_adjacency(int m, int r, int d);

struct ClassSpectrumCheck {
  int d;
  bool passed;
  std::vector<std::pair<long, std::uint64_t>> expected;  // (eigenvalue, multiplicity)
  std::vector<std::pair<long, std::uint64_t>> observed;
  double max_rounding_error;
};

struct SchemeVerification {
  int m;
  int r;
  bool passed;
  std::vector<std::uint64_t> multiplicities;  // per x
  std::vector<ClassSpectrumCheck> classes;
  nlohmann::ordered_json to_json() const;
};

SchemeVerification verify_scheme_spectrum(int m, int r);

}  // namespace fermitheta
