#include "doctest.h"
#include "oracle.hpp"

#include <cmath>
#include <random>

#include "fermitheta/combinatorics.hpp"
#include "fermitheta/errors.hpp"
#include "fermitheta/graph.hpp"
#include "fermitheta/index.hpp"
#include "fermitheta/kernels.hpp"
#include "fermitheta/models.hpp"
#include "fermitheta/stats.hpp"

using namespace fermitheta;

namespace {

double normalized_trace_sq(const ComplexMatrix& h) {
  return (h * h).trace().real() / static_cast<double>(h.rows());
}

}  // namespace

TEST_CASE("SYK samples are Hermitian and traceless") {
  const auto inst = sample_syk(8, 4, 1, 0);
  const auto& h = inst.hamiltonian().matrix();
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(h.trace()) < 1e-10);
  CHECK(inst.sample().g.size() == 70);
  // Independent assembly from hermitized monomials.
  const auto set = enumerate_set(OperatorKind::majorana, 8, 4);
  ComplexMatrix ref = ComplexMatrix::Zero(16, 16);
  for (std::size_t i = 0; i < set.size(); ++i) ref += inst.sample().g[i] * materialize(set.majoranas()[i], true);
  ref /= std::sqrt(70.0);
  CHECK((ref - h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single-term SYK spectrum is plus or minus g") {
  const auto inst = sample_syk(8, 8, 3, 5);
  const double g = inst.sample().g[0];
  const auto& s = inst.spectrum();
  for (Eigen::Index i = 0; i < 8; ++i) CHECK(std::abs(s[i] + std::abs(g)) < 1e-12);
  for (Eigen::Index i = 8; i < 16; ++i) CHECK(std::abs(s[i] - std::abs(g)) < 1e-12);
}

TEST_CASE("E normalized Tr H^2 = 1") {
  const Ensemble syk(ModelKind::syk, 12, 4, 9);
  std::vector<double> v;
  for (std::uint64_t s = 0; s < 200; ++s) v.push_back(normalized_trace_sq(syk.hamiltonian(syk.draw(s).g)));
  CHECK(std::abs(stats::mean(v) - 1.0) <= 5.0 * stats::standard_error(v));

  const Ensemble sg(ModelKind::spin_glass, 8, 2, 9);
  std::vector<double> w;
  for (std::uint64_t s = 0; s < 200; ++s) w.push_back(normalized_trace_sq(sg.hamiltonian(sg.draw(s).g)));
  CHECK(std::abs(stats::mean(w) - 1.0) <= 5.0 * stats::standard_error(w));
}

TEST_CASE("spin glass sizes") {
  const auto inst = sample_spin_glass(4, 1, 2, 0);
  CHECK(inst.sample().g.size() == 12);
  const auto& h = inst.hamiltonian().matrix();
  CHECK(std::abs(h.trace()) < 1e-10);
  ComplexMatrix ref = ComplexMatrix::Zero(16, 16);
  const auto set = enumerate_set(OperatorKind::pauli, 4, 1);
  for (std::size_t i = 0; i < 12; ++i) ref += inst.sample().g[i] * oracle::pauli(set.paulis()[i].letters());
  CHECK((ref / std::sqrt(12.0) - h).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(sample_spin_glass(13, 1, 1), CapacityError);
}

TEST_CASE("classical p-spin energies") {
  const auto c = sample_classical_pspin(5, 5, 1, 0);
  const double j = c.sample.g[0];
  for (std::size_t b = 0; b < 32; ++b) {
    const int parity = std::popcount(b) % 2;
    CHECK(std::abs(c.energies[b] - (parity ? -j : j)) < 1e-12);
  }
  // Brute-force oracle at (6,2), and flip symmetry for even p.
  const auto e = sample_classical_pspin(6, 2, 4, 1);
  const auto subsets = combinations(6, 2);
  for (std::size_t b = 0; b < 64; ++b) {
    double acc = 0.0;
    for (std::size_t t = 0; t < subsets.size(); ++t) {
      double prod = 1.0;
      for (int i : subsets[t]) prod *= ((b >> (5 - i)) & 1u) ? -1.0 : 1.0;
      acc += e.sample.g[t] * prod;
    }
    CHECK(std::abs(e.energies[b] - acc / std::sqrt(15.0)) < 1e-12);
    CHECK(std::abs(e.energies[b] - e.energies[63 - b]) < 1e-12);
  }
  const Ensemble ens(ModelKind::classical, 6, 3, 2);
  std::vector<double> v;
  for (std::uint64_t s = 0; s < 10000; ++s) v.push_back(ens.classical_energies(ens.draw(s).g)[13]);
  const double var = stats::variance(v);
  // SE of a sample variance for Gaussian data: sqrt(2/(N-1)).
  CHECK(std::abs(var - 1.0) <= 5.0 * std::sqrt(2.0 / 9999.0));
  CHECK_THROWS_AS(sample_classical_pspin(23, 2, 1), CapacityError);
}

TEST_CASE("reproducible disorder and serial/parallel assembly") {
  const Ensemble a(ModelKind::syk, 10, 4, 77);
  const Ensemble b(ModelKind::syk, 10, 4, 77);
  CHECK(a.draw(3).g == b.draw(3).g);
  CHECK(a.draw(3).g != a.draw(4).g);
  const auto g = a.draw(0).g;
  const double scale = 1.0 / std::sqrt(static_cast<double>(a.m()));
  const auto hs = kernels::assemble_hamiltonian_serial(a.terms(), g, scale);
  const auto hp = kernels::assemble_hamiltonian_parallel(a.terms(), g, scale, 2);
  CHECK((hs - hp).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("commutation degree counts") {
  CHECK(h_comm_count(ModelKind::syk, 6, 2) == 8);
  CHECK(h_comm_count(ModelKind::syk, 8, 4) == 32);
  CHECK(h_comm_count(ModelKind::syk, 8, 4) <= 4 * 35);
  CHECK(h_comm_closed_form(ModelKind::syk, 16, 4) == 928);
  CHECK(h_comm_count(ModelKind::spin_glass, 4, 2) ==
        commutation_degree(commutation_graph(enumerate_set(OperatorKind::pauli, 4, 2))));
}

TEST_CASE("lambda_max lower bound") {
  CHECK(lambda_max_lower_bound(100, 10, 1.0 / 16.0).bound == 0.0);
  CHECK(lambda_max_lower_bound(100, 10, 1.0 / 16.0).vacuous);
  const auto b = lambda_max_lower_bound(1820, 928, 28.0 / 1820.0, 1.0);
  CHECK(b.bound == doctest::Approx(std::sqrt(1820.0) / (4.0 * std::sqrt(928.0)) * (1.0 - 16.0 * 28.0 / 1820.0)));
  CHECK(std::abs(b.bound - 0.264) < 1e-3);
  CHECK(b.beta_max == doctest::Approx(std::sqrt(1820.0 / 928.0)));
  CHECK(lambda_max_lower_bound(1820, 928, 28.0 / 1820.0, 2.0).bound < b.bound);
  CHECK(lambda_max_lower_bound(1820, 928, 40.0 / 1820.0, 1.0).bound < b.bound);
}

TEST_CASE("ansatz bounds arithmetic") {
  CHECK(ansatz_bounds_report(100, 4, 1e-6, 64, 1e-3).circuit_gate_threshold == 0);
  const auto r = ansatz_bounds_report(100, 4, 0.5, 64, 1e-3);
  const double sigma2 = oracle::binom(50, 2) / oracle::binom(100, 4);
  CHECK(r.sigma2 == doctest::Approx(sigma2).epsilon(1e-12));
  const double budget = 0.25 * 100 / (2 * sigma2) + std::log(1e-3);
  const auto g = static_cast<std::uint64_t>(std::floor(budget / std::log(64.0 * 4950.0)));
  CHECK(r.circuit_gate_threshold == g);
  CHECK(r.nn_weight_threshold == static_cast<std::uint64_t>(std::floor(budget)));
  CHECK(r.mps_bond_threshold == static_cast<std::uint64_t>(std::floor(std::sqrt(budget - std::log(100.0)))));
  CHECK(r.gaussian_state_excluded == (budget > 1e4));
  const auto r2 = ansatz_bounds_report(100, 4, 1.0, 64, 1e-3);
  const double ratio = static_cast<double>(r2.circuit_gate_threshold) / static_cast<double>(r.circuit_gate_threshold);
  CHECK(std::abs(ratio - 4.0) <= 0.4);
  CHECK(r2.circuit_gate_threshold >= r.circuit_gate_threshold);
  CHECK_THROWS_AS(ansatz_bounds_report(100, 4, 0.5, 1, 1e-3), InputError);
  CHECK(r.to_json().contains("circuit_gate_threshold"));
}

TEST_CASE("depolarized energy identity") {
  const ComplexVector zero = (ComplexVector(4) << 1, 0, 0, 0).finished();
  const auto zz = depolarized_energy_identity({PauliString::from_letters("ZZ")}, {1.0}, zero);
  CHECK(zz.lhs == doctest::Approx(1.0 / 9.0));
  CHECK(zz.rhs == doctest::Approx(1.0 / 9.0));
  const ComplexVector bell = (ComplexVector(4) << 1, 0, 0, 1).finished() / std::sqrt(2.0);
  const auto xz = depolarized_energy_identity({PauliString::from_letters("XX"), PauliString::from_letters("ZZ")},
                                              {1.0, 1.0}, bell);
  CHECK(xz.lhs == doctest::Approx(2.0 / 9.0));
  CHECK(xz.abs_diff <= 1e-12);

  std::mt19937 rng(8);
  std::normal_distribution<double> nd;
  const auto set = enumerate_set(OperatorKind::pauli, 3, 2);
  std::vector<double> c(set.size());
  ComplexMatrix h = ComplexMatrix::Zero(8, 8);
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = nd(rng);
    h += c[i] * oracle::pauli(set.paulis()[i].letters());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const ComplexVector top = es.eigenvectors().col(7);
  const auto res = depolarized_energy_identity(set.paulis(), c, top);
  CHECK(std::abs(res.lhs - es.eigenvalues()[7] / 9.0) < 1e-12);
  CHECK_THROWS_AS(depolarized_energy_identity({PauliString::from_letters("ZZ"), PauliString::from_letters("ZI")},
                                              {1.0, 1.0}, zero),
                  InputError);
}

TEST_CASE("spectral sanity") {
  const Ensemble ens(ModelKind::syk, 16, 4, 3);
  const double cap = std::sqrt(2.0 * std::log(2.0 * 256.0 / 1e-2));
  const auto psi = stabilized_state(commuting_majorana_family(16, 4));
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto d = ens.draw(s);
    const auto h = ens.hamiltonian(d.g);
    const auto spec = eigvalsh(DenseHermitian(h));
    const double lmax = spec[spec.size() - 1];
    CHECK(lmax <= cap);
    CHECK(lmax >= std::abs(psi.dot(h * psi).real()) - 1e-12);
  }
}

TEST_CASE("capacity guard") {
  CHECK_THROWS_AS(Ensemble(ModelKind::syk, 26, 4, 1), CapacityError);
}
