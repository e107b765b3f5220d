#include "doctest.h"
#include "oracle.hpp"

#include <random>

#include "fermitheta/graph.hpp"
#include "fermitheta/index.hpp"

using namespace fermitheta;

namespace {

OperatorSet paulis(std::size_t n, std::vector<const char*> letters) {
  std::vector<PauliString> v;
  for (auto* s : letters) v.push_back(PauliString::from_letters(s));
  return OperatorSet(n, 1, std::move(v), Provenance::custom);
}

// Mean squared expectation over all weight-k Paulis by dense matrices.
double brute_pauli_index(std::size_t n, std::size_t k, const ComplexVector& psi) {
  const auto set = enumerate_set(OperatorKind::pauli, n, k);
  double acc = 0.0;
  for (const auto& p : set.paulis()) {
    const auto m = oracle::pauli(p.letters());
    acc += std::norm(psi.dot(m * psi));
  }
  return acc / static_cast<double>(set.size());
}

ComplexVector product_state(const std::vector<QubitState>& f) {
  ComplexVector v = ComplexVector::Ones(1);
  for (const auto& q : f) {
    ComplexVector next(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next[2 * i] = v[i] * q[0];
      next[2 * i + 1] = v[i] * q[1];
    }
    v = next;
  }
  return v;
}

QubitState random_qubit(std::mt19937& rng) {
  std::normal_distribution<double> nd;
  QubitState q(Complex(nd(rng), nd(rng)), Complex(nd(rng), nd(rng)));
  return q / q.norm();
}

}  // namespace

TEST_CASE("index upper bounds") {
  const auto u62 = index_upper(enumerate_set(OperatorKind::majorana, 6, 2));
  REQUIRE(u62.exact);
  CHECK(*u62.exact == mpq_class(1, 5));
  const auto u84 = index_upper(enumerate_set(OperatorKind::majorana, 8, 4));
  CHECK(*u84.exact == mpq_class(1, 5));
  const auto xyz = index_upper(paulis(1, {"X", "Y", "Z"}));
  CHECK(std::abs(xyz.value - 1.0 / 3.0) < 1e-6);
}

TEST_CASE("Majorana lower bound with witness") {
  CHECK(index_lower_majorana(6, 2).value == mpq_class(1, 5));
  CHECK(index_lower_majorana(8, 4).value == mpq_class(3, 35));
  const auto l = index_lower_majorana(12, 4);
  CHECK(l.value == mpq_class(1, 33));
  CHECK(l.witness_checked);
  CHECK(l.witness_value >= l.value.get_d() - 1e-9);
}

TEST_CASE("product states reach 3^-k") {
  const QubitState zero(1.0, 0.0);
  CHECK(std::abs(index_pauli_product(2, 1, {zero, zero}) - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(index_pauli_product(3, 2, {zero, zero, zero}) - 1.0 / 9.0) < 1e-12);
  std::mt19937 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<QubitState> f;
    for (int i = 0; i < 4; ++i) f.push_back(random_qubit(rng));
    CHECK(std::abs(index_pauli_product(4, 2, f) - 1.0 / 9.0) < 1e-12);
    CHECK(std::abs(brute_pauli_index(4, 2, product_state(f)) - 1.0 / 9.0) < 1e-12);
  }
  CHECK_THROWS(index_pauli_product(2, 1, {zero, QubitState(1.0, 1.0)}));
  CHECK_THROWS(index_pauli_product(3, 1, {zero, zero}));
}

TEST_CASE("see-saw heuristic") {
  const auto zz = index_seesaw(paulis(2, {"ZI", "IZ"}));
  CHECK(std::abs(zz.value - 1.0) < 1e-9);
  const auto xyz = index_seesaw(paulis(1, {"X", "Y", "Z"}));
  CHECK(std::abs(xyz.value - 1.0 / 3.0) < 1e-9);
  const auto s62 = index_seesaw(enumerate_set(OperatorKind::majorana, 6, 2));
  CHECK(std::abs(s62.value - 0.2) < 1e-6);
  CHECK(s62.monotone);
  for (std::size_t i = 1; i < s62.trajectory.size(); ++i) CHECK(s62.trajectory[i] >= s62.trajectory[i - 1] - 1e-12);
}

TEST_CASE("weak Pauli bound") {
  CHECK(pauli_index_weak_bound(1) == doctest::Approx(2.0 / 3.0));
  CHECK(pauli_index_weak_bound(2) == doctest::Approx(4.0 / 9.0));
  CHECK(pauli_index_weak_bound(3) == doctest::Approx(8.0 / 27.0));
  const auto s = index_seesaw(enumerate_set(OperatorKind::pauli, 3, 3));
  CHECK(s.value <= 8.0 / 27.0);
  CHECK(s.value >= 1.0 / 27.0 - 1e-9);
}

TEST_CASE("off-diagonal index check") {
  const auto single = offdiag_index_check(paulis(1, {"Z"}), 4, 1);
  CHECK(single.passed);
  CHECK(single.estimate <= 16.0 * 1.0 + 1e-9);
  CHECK(std::abs(single.estimate - 1.0) < 1e-9);

  // u = |0>, v = |1>: |<0|X|1>|^2 + |<0|Y|1>|^2 + |<0|Z|1>|^2 = 2.
  double direct = 0.0;
  for (const char* s : {"X", "Y", "Z"}) direct += std::norm(oracle::pauli(s)(0, 1));
  CHECK(direct / 3.0 == doctest::Approx(2.0 / 3.0));
  const auto xyz = offdiag_index_check(paulis(1, {"X", "Y", "Z"}), 8, 2);
  CHECK(xyz.passed);
  CHECK(xyz.estimate >= 2.0 / 3.0 - 1e-9);
  CHECK(xyz.estimate <= 16.0 / 3.0);

  const auto s62 = offdiag_index_check(enumerate_set(OperatorKind::majorana, 6, 2), 32, 3);
  CHECK(s62.passed);
  CHECK(s62.estimate <= 16.0 / 5.0);
}

TEST_CASE("sandwich closes on small Majorana sets") {
  for (auto [n, q] : std::vector<std::pair<int, int>>{{6, 2}, {8, 4}}) {
    const auto est = estimate_index(enumerate_set(OperatorKind::majorana, n, q));
    REQUIRE(est.exact_rational);
    CHECK(*est.exact_rational == mpq_class(1, 5));
    CHECK(est.lower <= est.heuristic + 1e-9);
    CHECK(est.heuristic <= est.upper + 1e-9);
    CHECK(std::abs(est.heuristic - 0.2) < 1e-6);
  }
}

TEST_CASE("commuting-subset certificates") {
  const auto set = enumerate_set(OperatorKind::majorana, 8, 4);
  const auto c = certify_from_independent_set(set);
  CHECK(c.value == mpq_class(1, 5));
  CHECK(c.witness_value >= 0.2 - 1e-9);
  const auto psi = stabilized_state(commuting_majorana_family(8, 4));
  const auto from_state = certify_from_state(set, psi);
  CHECK(from_state.value >= mpq_class(3, 35));
}

TEST_CASE("Pauli upper bound at the product-state value") {
  const auto up = index_upper(enumerate_set(OperatorKind::pauli, 4, 2));
  CHECK(std::abs(up.value - 1.0 / 9.0) < 1e-3);
  const auto est = estimate_index(enumerate_set(OperatorKind::pauli, 2, 1));
  CHECK(std::abs(est.upper - 1.0 / 3.0) < 1e-3);
  CHECK(est.lower <= est.upper + 1e-9);
}

TEST_CASE("IndexEstimate JSON") {
  const auto j = estimate_index(enumerate_set(OperatorKind::majorana, 6, 2)).to_json();
  CHECK(j["exact_rational"] == "1/5");
  CHECK(j.contains("lower_source"));
}
