#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "fermitheta/algebra.hpp"
#include "fermitheta/theta.hpp"

namespace fermitheta {

// (1/m) sum_i <psi|A_i|psi>^2 for Hermitian A_i.
double mean_squared_expectation(std::span<const CompiledPauli> ops, const ComplexVector& psi);

struct IndexUpper {
  double value;
  std::optional<mpq_class> exact;  // LP path
  ThetaResult theta;
};
// theta(G(S)) / |S|: exact LP for a full Majorana enumeration, SDP upper bracket otherwise.
IndexUpper index_upper(const OperatorSet& set, double tol = 1e-6);

struct MajoranaLower {
  mpq_class value;  // C(n/2, q/2) / C(n, q)
  bool witness_checked = false;
  double witness_value = 0.0;  // mean squared expectation in the stabilized state
};
MajoranaLower index_lower_majorana(int n, int q);

// Lower bound count/|S| certified by a pairwise commuting subset: a joint
// eigenvector gives <A>^2 = 1 on every chosen member.
struct LowerCertificate {
  mpq_class value;
  std::vector<std::size_t> members;
  std::string source;
  double witness_value = 0.0;  // full mean squared expectation of the witness
  ComplexVector witness;
};
LowerCertificate certify_commuting_subset(const OperatorSet& set, const std::vector<std::size_t>& members,
                                          std::string source);
// Members whose |<A>| is within tol of 1 in psi.
LowerCertificate certify_from_state(const OperatorSet& set, const ComplexVector& psi, double tol = 1e-6);
// Largest commuting subset (maximum independent set of the commutation graph).
LowerCertificate certify_from_independent_set(const OperatorSet& set);

using QubitState = Eigen::Vector2cd;
// (1/|P^n_k|) sum over weight-k Paulis of <P>^2 in the product state.
double index_pauli_product(std::size_t n, std::size_t k, const std::vector<QubitState>& factors);

struct SeesawResult {
  double value = 0.0;
  ComplexVector state;
  std::vector<double> trajectory;  // objective per iteration of the best restart
  bool monotone = true;            // across every restart
  int restarts = 0;
};
SeesawResult index_seesaw(const OperatorSet& set, int restarts = 8, int iters = 200, std::uint64_t seed = 1);

double pauli_index_weak_bound(std::size_t k);

struct OffdiagReport {
  double estimate = 0.0;
  double upper = 0.0;
  double bound = 0.0;  // 16 * upper + 1e-9
  bool passed = false;
  int trials = 0;
  nlohmann::ordered_json to_json() const;
};
OffdiagReport offdiag_index_check(const OperatorSet& set, int trials, std::uint64_t seed);

struct IndexEstimate {
  double upper = 0.0;
  std::optional<mpq_class> upper_exact;
  double lower = 0.0;
  std::optional<mpq_class> lower_exact;
  std::string lower_source;
  double heuristic = 0.0;
  ComplexVector witness;
  std::optional<double> exact;
  std::optional<mpq_class> exact_rational;
  nlohmann::ordered_json to_json() const;
};

enum class IndexMethod { upper, lower, seesaw, all };
IndexMethod parse_index_method(std::string_view text);
IndexEstimate estimate_index(const OperatorSet& set, IndexMethod method = IndexMethod::all, std::uint64_t seed = 1);

}  // namespace fermitheta
