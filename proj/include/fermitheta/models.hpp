#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fermitheta/algebra.hpp"
#include "fermitheta/densekernel.hpp"

namespace fermitheta {

enum class ModelKind { syk, spin_glass, classical };
std::string to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);  // syk | sg | classical

// Number of disorder coefficients: C(n,q), C(n,k) 3^k or C(n,p).
std::size_t term_count(ModelKind kind, std::size_t n, std::size_t locality);

struct DisorderSample {
  ModelKind kind;
  std::size_t n;
  std::size_t locality;
  std::uint64_t seed;
  std::uint64_t stream;
  std::vector<double> g;
};

// Fixed model family with precompiled terms; draw(stream) is the disorder of
// Monte Carlo sample `stream`.
class Ensemble {
 public:
  Ensemble(ModelKind kind, std::size_t n, std::size_t locality, std::uint64_t seed);

  ModelKind kind() const { return kind_; }
  std::size_t n() const { return n_; }
  std::size_t locality() const { return locality_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t m() const { return m_; }
  std::size_t dim() const { return dim_; }
  bool quantum() const { return kind_ != ModelKind::classical; }
  // Hermitian Pauli form of every term, enumeration order (quantum models).
  const std::vector<CompiledPauli>& terms() const { return terms_; }
  const std::vector<PauliString>& term_strings() const { return strings_; }

  DisorderSample draw(std::uint64_t stream) const;
  // m^{-1/2} sum_i g_i A_i (quantum models).
  ComplexMatrix hamiltonian(std::span<const double> g, int threads = 1) const;
  // H(sigma) for all 2^n configurations; sigma_i = (-1)^{bit of qubit i}.
  std::vector<double> classical_energies(std::span<const double> g, int threads = 1) const;
  // Ascending eigenvalues (classical: sorted energies).
  RealVector spectrum(std::span<const double> g) const;

 private:
  ModelKind kind_;
  std::size_t n_;
  std::size_t locality_;
  std::uint64_t seed_;
  std::size_t m_;
  std::size_t dim_;
  std::vector<PauliString> strings_;
  std::vector<CompiledPauli> terms_;
  std::vector<std::uint64_t> masks_;  // classical supports
};

class ModelInstance {
 public:
  ModelInstance(DisorderSample sample, ComplexMatrix h);

  const DisorderSample& sample() const { return sample_; }
  const DenseHermitian& hamiltonian() const { return h_; }
  std::size_t dim() const { return static_cast<std::size_t>(h_.dim()); }
  const RealVector& spectrum() const;
  double lambda_max() const { return spectrum()[spectrum().size() - 1]; }

 private:
  DisorderSample sample_;
  DenseHermitian h_;
  mutable std::optional<RealVector> spectrum_;
};

ModelInstance sample_syk(std::size_t n, std::size_t q, std::uint64_t seed, std::uint64_t stream = 0);
ModelInstance sample_spin_glass(std::size_t n, std::size_t k, std::uint64_t seed, std::uint64_t stream = 0);

struct ClassicalSample {
  DisorderSample sample;
  std::vector<double> energies;  // 2^n entries
};
ClassicalSample sample_classical_pspin(std::size_t n, std::size_t p, std::uint64_t seed, std::uint64_t stream = 0);

// Maximal number of terms anticommuting with one term. Cross-checked against
// the commutation graph degree when the enumeration has at most 2000 members.
std::uint64_t h_comm_count(ModelKind kind, std::size_t n, std::size_t locality);
std::uint64_t h_comm_closed_form(ModelKind kind, std::size_t n, std::size_t locality);

struct LambdaMaxBound {
  double bound;
  double beta_max;
  bool vacuous;
};
LambdaMaxBound lambda_max_lower_bound(double m, double h_comm, double delta_upper, double c1 = 1.0);

struct BoundsReport {
  std::size_t n;
  std::size_t q;
  double t;
  double gate_set;
  double delta;
  double sigma2;           // theta / C(n,q)
  double budget;           // t^2 n / (2 sigma^2) + ln delta
  std::uint64_t circuit_gate_threshold;
  std::uint64_t mps_bond_threshold;
  std::uint64_t nn_weight_threshold;
  bool gaussian_state_excluded;  // budget exceeds the n^2 net exponent
  double c1;
  double lambda_max_lower;
  double beta_max;
  nlohmann::ordered_json to_json() const;
};
BoundsReport ansatz_bounds_report(std::size_t n, std::size_t q, double t, double gate_set, double delta,
                                  double c1 = 1.0);
// Same arithmetic with an explicit concentration rate.
BoundsReport ansatz_bounds_report_with_rate(std::size_t n, std::size_t q, double t, double gate_set, double delta,
                                            double sigma2, double c1 = 1.0);

struct DepolarizedIdentity {
  double lhs;
  double rhs;
  double abs_diff;
};
// H = sum_i c_i P_i with every P_i Hermitian of weight exactly k.
DepolarizedIdentity depolarized_energy_identity(const std::vector<PauliString>& terms, const std::vector<double>& coeffs,
                                                const ComplexVector& phi);

}  // namespace fermitheta
