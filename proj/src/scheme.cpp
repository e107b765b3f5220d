#include "fermitheta/scheme.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "fermitheta/combinatorics.hpp"
#include "fermitheta/errors.hpp"

namespace fermitheta {

mpz_class binomial_mpz(long a, long b) {
  if (b < 0 || a < b || a < 0) return 0;
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
  return out;
}

namespace {

void check_indices(int m, int r) {
  if (m < 0 || r < 0 || r > m) throw InputError("Johnson scheme needs 0 <= r <= m");
}

// C(a, j) as a polynomial in a, so negative a is allowed.
mpz_class falling_binomial(long a, long j) {
  mpz_class num = 1;
  mpz_class den = 1;
  for (long i = 0; i < j; ++i) {
    num *= a - i;
    den *= i + 1;
  }
  return num / den;
}

}  // namespace

mpz_class dual_hahn(int m, int r, int d, int x) {
  check_indices(m, r);
  if (d < 0 || d > r || x < 0 || x > r) throw InputError("dual Hahn indices need 0 <= d, x <= r");
  mpz_class acc = 0;
  for (int j = 0; j <= d; ++j) {
    mpz_class term = binomial_mpz(r - j, d - j) * falling_binomial(r - x, j) * falling_binomial(m - r + j - x, j);
    if ((d - j) % 2 == 1) term = -term;
    acc += term;
  }
  return acc;
}

HahnTable hahn_table(int m, int r) {
  check_indices(m, r);
  HahnTable t{m, r, {}};
  t.values.assign(static_cast<std::size_t>(r + 1), std::vector<mpz_class>(static_cast<std::size_t>(r + 1)));
  for (int d = 0; d <= r; ++d) {
    for (int x = 0; x <= r; ++x) t.values[static_cast<std::size_t>(d)][static_cast<std::size_t>(x)] = dual_hahn(m, r, d, x);
  }
  return t;
}

std::uint64_t johnson_multiplicity(int m, int r, int x) {
  check_indices(m, r);
  if (x < 0 || x > std::min(r, m - r)) return 0;
  return binomial_u64(m, x) - (x > 0 ? binomial_u64(m, x - 1) : 0);
}

RealMatrix johnson_adjacency(int m, int r, int d) {
  check_indices(m, r);
  if (d < 0 || d > r) throw InputError("distance class out of range");
  if (binomial_u64(m, r) > kMaxJohnsonVertices) throw CapacityError("Johnson graph limited to 2000 vertices");
  const auto subsets = combinations(m, r);
  std::vector<std::uint64_t> masks;
  for (const auto& s : subsets) {
    std::uint64_t mask = 0;
    for (int i : s) mask |= std::uint64_t{1} << i;
    masks.push_back(mask);
  }
  const auto n = static_cast<Eigen::Index>(masks.size());
  RealMatrix a = RealMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const int common = std::popcount(masks[static_cast<std::size_t>(i)] & masks[static_cast<std::size_t>(j)]);
      if (r - common == d) a(i, j) = 1.0;
    }
  }
  return a;
}

SchemeVerification verify_scheme_spectrum(int m, int r) {
  check_indices(m, r);
  if (binomial_u64(m, r) > kMaxJohnsonVertices) throw CapacityError("Johnson graph limited to 2000 vertices");
  SchemeVerification out{m, r, true, {}, {}};
  for (int x = 0; x <= r; ++x) out.multiplicities.push_back(johnson_multiplicity(m, r, x));
  for (int d = 0; d <= r; ++d) {
    ClassSpectrumCheck c{d, true, {}, {}, 0.0};
    std::map<long, std::uint64_t> expected;
    for (int x = 0; x <= r; ++x) {
      const auto mult = out.multiplicities[static_cast<std::size_t>(x)];
      if (mult > 0) expected[dual_hahn(m, r, d, x).get_si()] += mult;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(johnson_adjacency(m, r, d), Eigen::EigenvaluesOnly);
    std::map<long, std::uint64_t> observed;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      const double v = solver.eigenvalues()[i];
      const double rounded = std::round(v);
      c.max_rounding_error = std::max(c.max_rounding_error, std::abs(v - rounded));
      observed[static_cast<long>(rounded)] += 1;
    }
    c.expected.assign(expected.begin(), expected.end());
    c.observed.assign(observed.begin(), observed.end());
    c.passed = expected == observed && c.max_rounding_error <= 1e-8;
    out.passed = out.passed && c.passed;
    out.classes.push_back(std::move(c));
  }
  return out;
}

nlohmann::ordered_json SchemeVerification::to_json() const {
  nlohmann::ordered_json j;
  j["m"] = m;
  j["r"] = r;
  j["passed"] = passed;
  j["multiplicities"] = multiplicities;
  auto cls = nlohmann::ordered_json::array();
  for (const auto& c : classes) {
    auto pairs = [](const std::vector<std::pair<long, std::uint64_t>>& v) {
      auto a = nlohmann::ordered_json::array();
      for (auto [value, mult] : v) a.push_back({{"eigenvalue", value}, {"multiplicity", mult}});
      return a;
    };
    cls.push_back({{"d", c.d},
                   {"passed", c.passed},
                   {"expected", pairs(c.expected)},
                   {"observed", pairs(c.observed)},
                   {"max_rounding_error", c.max_rounding_error}});
  }
  j["classes"] = std::move(cls);
  return j;
}

}  // namespace fermitheta
