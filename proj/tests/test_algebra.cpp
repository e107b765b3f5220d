#include "doctest.h"
#include "oracle.hpp"

#include <random>

#include "fermitheta/algebra.hpp"
#include "fermitheta/errors.hpp"

using namespace fermitheta;

namespace {

PauliString P(const char* s) { return PauliString::from_letters(s); }

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

std::string random_letters(std::mt19937& rng, int n) {
  static const char kL[4] = {'I', 'X', 'Y', 'Z'};
  std::string s;
  for (int i = 0; i < n; ++i) s += kL[rng() % 4];
  return s;
}

}  // namespace

TEST_CASE("pauli anticommutation examples") {
  CHECK(pauli_anticommutes(P("XI"), P("ZI")));
  CHECK_FALSE(pauli_anticommutes(P("XX"), P("ZZ")));
  CHECK_FALSE(pauli_anticommutes(P("YI"), P("YI")));
  CHECK_THROWS_AS(pauli_anticommutes(P("X"), P("XX")), InputError);
}

TEST_CASE("symplectic predicate agrees with matrices on random pairs") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto a = random_letters(rng, n);
    const auto b = random_letters(rng, n);
    const auto ma = oracle::pauli(a);
    const auto mb = oracle::pauli(b);
    const bool anti = max_abs(ma * mb + mb * ma) < 1e-12;
    const bool comm = max_abs(ma * mb - mb * ma) < 1e-12;
    REQUIRE(anti != comm);
    CHECK(pauli_anticommutes(P(a.c_str()), P(b.c_str())) == anti);
  }
}

TEST_CASE("majorana anticommutation examples against Jordan-Wigner matrices") {
  CHECK_FALSE(majorana_anticommutes(MajoranaMonomial(4, {1, 2}), MajoranaMonomial(4, {3, 4})));
  CHECK(majorana_anticommutes(MajoranaMonomial(4, {1, 2}), MajoranaMonomial(4, {2, 3})));
  CHECK_FALSE(majorana_anticommutes(MajoranaMonomial(8, {1, 2, 3, 4}), MajoranaMonomial(8, {3, 4, 5, 6})));

  auto product = [](std::initializer_list<int> modes, int n) {
    oracle::Mat m = oracle::Mat::Identity(1 << (n / 2), 1 << (n / 2));
    for (int j : modes) m = m * oracle::majorana(j, n);
    return m;
  };
  const auto a = product({1, 2}, 4);
  const auto b = product({2, 3}, 4);
  CHECK(max_abs(a * b + b * a) < 1e-12);
  const auto c = product({1, 2, 3, 4}, 8);
  const auto d = product({3, 4, 5, 6}, 8);
  CHECK(max_abs(c * d - d * c) < 1e-12);
}

TEST_CASE("majorana predicate agrees with matrices on random pairs") {
  std::mt19937 rng(11);
  const int n = 8;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> s;
    std::vector<int> t;
    for (int j = 1; j <= n; ++j) {
      if (rng() % 2) s.push_back(j);
      if (rng() % 2) t.push_back(j);
    }
    if (s.empty() || t.empty()) continue;
    const MajoranaMonomial ms(n, s);
    const MajoranaMonomial mt(n, t);
    const auto a = materialize(ms, false);
    const auto b = materialize(mt, false);
    const bool anti = max_abs(a * b + b * a) < 1e-12;
    CHECK(majorana_anticommutes(ms, mt) == anti);
  }
}

TEST_CASE("pauli products") {
  const auto xz = multiply_paulis(P("X"), P("Z"));
  CHECK(xz == PauliString::from_letters("Y", 3));  // -i Y
  CHECK(max_abs(materialize(xz) - oracle::C(0, -1) * oracle::pauli("Y")) < 1e-14);

  const auto pp = multiply_paulis(P("XYZ"), P("XYZ"));
  CHECK(pp.weight() == 0);

  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = PauliString::from_letters(random_letters(rng, 3), static_cast<int>(rng() % 4));
    const auto b = PauliString::from_letters(random_letters(rng, 3), static_cast<int>(rng() % 4));
    CHECK(max_abs(materialize(a) * materialize(b) - materialize(multiply_paulis(a, b))) < 1e-12);
  }
}

TEST_CASE("letters round trip and hermiticity") {
  const auto y = P("Y");
  CHECK(y.letters() == "Y");
  CHECK(y.is_hermitian());
  CHECK(y.letter_phase() == 0);
  CHECK_FALSE(PauliString::from_letters("XZ", 1).is_hermitian());
  CHECK(max_abs(materialize(P("ZZ")) - oracle::pauli("ZZ")) == 0.0);
  ComplexMatrix zz = ComplexMatrix::Zero(4, 4);
  zz.diagonal() << 1, -1, -1, 1;
  CHECK(max_abs(materialize(P("ZZ")) - zz) == 0.0);
  CHECK_THROWS_AS(P("XQ"), InputError);
}

TEST_CASE("Jordan-Wigner images") {
  CHECK(jordan_wigner_majorana(1, 2).letters() == "X");
  CHECK(jordan_wigner_majorana(2, 2).letters() == "Y");
  CHECK(jordan_wigner_majorana(2, 2).letter_phase() == 0);
  CHECK(jordan_wigner_majorana(5, 8).letters() == "ZZXI");
  CHECK_THROWS_AS(jordan_wigner_majorana(0, 4), InputError);
  CHECK_THROWS_AS(jordan_wigner_majorana(5, 4), InputError);
  CHECK_THROWS_AS(jordan_wigner_majorana(1, 3), InputError);

  const int n = 8;
  const auto id = oracle::Mat::Identity(16, 16);
  for (int i = 1; i <= n; ++i) {
    const auto gi = materialize(jordan_wigner_majorana(i, n));
    CHECK(max_abs(gi - oracle::majorana(i, n)) < 1e-15);
    for (int j = 1; j <= n; ++j) {
      const auto gj = materialize(jordan_wigner_majorana(j, n));
      CHECK(max_abs(gi * gj + gj * gi - (i == j ? 2.0 : 0.0) * id) < 1e-12);
    }
  }
}

TEST_CASE("hermitized materialization") {
  const auto m = materialize(MajoranaMonomial(4, {1, 2}), true);
  CHECK(max_abs(m - m.adjoint()) < 1e-14);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  CHECK(es.eigenvalues()[0] == doctest::Approx(-1.0));
  CHECK(es.eigenvalues()[3] == doctest::Approx(1.0));
  // i gamma_1 gamma_2 by the oracle
  CHECK(max_abs(m - oracle::C(0, 1) * oracle::majorana(1, 4) * oracle::majorana(2, 4)) < 1e-14);

  const auto q4 = materialize(MajoranaMonomial(8, {1, 2, 3, 4}), true);
  CHECK(max_abs(q4 - q4.adjoint()) < 1e-14);
  CHECK(max_abs(q4 * q4 - ComplexMatrix::Identity(16, 16)) < 1e-12);
  CHECK_THROWS_AS(to_pauli(MajoranaMonomial(4, {1, 2, 3}), true), InputError);
}

TEST_CASE("dense cap") {
  CHECK_THROWS_AS(materialize(PauliString(15)), CapacityError);
}

TEST_CASE("enumeration sizes, order and invariants") {
  CHECK(enumerate_set(OperatorKind::majorana, 6, 2).size() == 15);
  CHECK(enumerate_set(OperatorKind::majorana, 8, 4).size() == 70);
  const auto p42 = enumerate_set(OperatorKind::pauli, 4, 2);
  CHECK(p42.size() == 54);
  std::size_t direct = 0;
  for (int code = 0; code < 256; ++code) {
    int w = 0;
    for (int q = 0; q < 4; ++q) w += ((code >> (2 * q)) & 3) != 0;
    direct += w == 2;
  }
  CHECK(direct == 54);
  CHECK(p42.paulis().front().letters() == "XXII");
  CHECK(p42.paulis().back().letters() == "IIZZ");
  for (const auto& p : p42.paulis()) CHECK(p.weight() == 2);

  const auto again = enumerate_set(OperatorKind::pauli, 4, 2);
  CHECK(again.paulis() == p42.paulis());

  const auto s = enumerate_set(OperatorKind::majorana, 6, 2);
  CHECK(s.majoranas().front().one_based() == std::vector<int>{1, 2});
  CHECK(s.majoranas().back().one_based() == std::vector<int>{5, 6});
  for (const auto& h : s.hermitian_paulis()) {
    const auto m = materialize(h);
    CHECK(max_abs(m - m.adjoint()) < 1e-12);
    CHECK(max_abs(m * m - ComplexMatrix::Identity(8, 8)) < 1e-12);
    CHECK(std::abs(m.trace()) < 1e-12);
  }
  CHECK_THROWS_AS(enumerate_set(OperatorKind::majorana, 7, 2), InputError);
  CHECK_THROWS_AS(enumerate_set(OperatorKind::pauli, 3, 4), InputError);
  CHECK_THROWS_AS(enumerate_set(OperatorKind::majorana, 40, 8), CapacityError);
}

TEST_CASE("operator sets reject duplicates and mixed sizes") {
  std::vector<PauliString> dup{P("XI"), P("XI")};
  CHECK_THROWS_AS(OperatorSet(2, 1, dup, Provenance::custom), InputError);
  std::vector<PauliString> mixed{P("XI"), P("X")};
  CHECK_THROWS_AS(OperatorSet(2, 1, mixed, Provenance::custom), InputError);
}

TEST_CASE("compiled Pauli action matches the dense matrix") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = PauliString::from_letters(random_letters(rng, 4), static_cast<int>(rng() % 4));
    ComplexVector v = ComplexVector::Random(16);
    const CompiledPauli c(p);
    CHECK((c.apply(v) - oracle::pauli(p.letters()) * std::pow(oracle::C(0, 1), p.letter_phase()) * v).norm() < 1e-12);
  }
}
