#include "doctest.h"
#include "oracle.hpp"

#include <map>

#include "fermitheta/errors.hpp"
#include "fermitheta/scheme.hpp"

using namespace fermitheta;

namespace {

// Eigenvalue multiset of an integer-spectrum symmetric matrix.
std::map<long, int> spectrum_counts(const RealMatrix& a) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(a);
  std::map<long, int> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) ++out[std::lround(es.eigenvalues()[i])];
  return out;
}

}  // namespace

TEST_CASE("dual Hahn examples") {
  CHECK(dual_hahn(8, 4, 1, 0) == 16);
  for (int x = 0; x <= 3; ++x) CHECK(dual_hahn(9, 3, 0, x) == 1);
  CHECK(dual_hahn(6, 2, 1, 1) == 2);
  CHECK(dual_hahn(6, 2, 1, 2) == -2);
  // Triangular graph T(6) = J(6,2) distance 1: spectrum {8, 2, -2}.
  const auto counts = spectrum_counts(johnson_adjacency(6, 2, 1));
  CHECK(counts.at(8) == 1);
  CHECK(counts.at(2) == 5);
  CHECK(counts.at(-2) == 9);
  CHECK(dual_hahn(5, 1, 1, 0) == 4);
  CHECK(dual_hahn(5, 1, 1, 1) == -1);
  CHECK_THROWS_AS(dual_hahn(5, 2, 3, 0), InputError);
}

TEST_CASE("Hahn table invariants") {
  for (int m = 2; m <= 12; ++m) {
    for (int r = 0; r <= m; ++r) {
      const auto t = hahn_table(m, r);
      for (int x = 0; x <= r; ++x) {
        CHECK(t.values[0][x] == 1);
        mpz_class sum = 0;
        for (int d = 0; d <= r; ++d) sum += t.values[d][x];
        // Sum over classes: eigenvalue of the all-ones matrix.
        if (x == 0) {
          CHECK(sum == static_cast<long>(oracle::binom(m, r)));
        } else if (x <= std::min(r, m - r)) {
          CHECK(sum == 0);
        }
      }
      for (int d = 0; d <= r; ++d) {
        CHECK(t.values[d][0] == static_cast<long>(oracle::binom(m - r, d) * oracle::binom(r, d)));
      }
    }
  }
}

TEST_CASE("Johnson adjacency examples") {
  const auto pm = johnson_adjacency(4, 2, 2);
  CHECK(pm.rows() == 6);
  for (Eigen::Index i = 0; i < 6; ++i) CHECK(pm.row(i).sum() == 1.0);
  CHECK(pm(0, 5) == 1.0);  // {0,1} and {2,3}
  const auto a621 = johnson_adjacency(6, 2, 1);
  for (Eigen::Index i = 0; i < a621.rows(); ++i) CHECK(a621.row(i).sum() == 8.0);
  CHECK((johnson_adjacency(5, 2, 0) - RealMatrix::Identity(10, 10)).norm() == 0.0);
  CHECK_THROWS_AS(johnson_adjacency(14, 7, 1), CapacityError);
}

TEST_CASE("scheme spectra verified by brute force") {
  for (auto [m, r] : std::vector<std::pair<int, int>>{{6, 2}, {8, 3}, {5, 1}, {9, 4}}) {
    const auto v = verify_scheme_spectrum(m, r);
    CHECK(v.passed);
    std::uint64_t total = 0;
    for (auto mult : v.multiplicities) total += mult;
    CHECK(total == static_cast<std::uint64_t>(oracle::binom(m, r)));
    // Independent check: compare against a direct eigen solve.
    for (int d = 0; d <= r; ++d) {
      const auto counts = spectrum_counts(johnson_adjacency(m, r, d));
      for (const auto& [value, mult] : v.classes[d].observed) CHECK(counts.at(value) == static_cast<int>(mult));
    }
  }
  const auto j = verify_scheme_spectrum(6, 2).to_json();
  CHECK(j["passed"] == true);
}
