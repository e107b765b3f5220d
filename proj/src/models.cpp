#include "fermitheta/models.hpp"

#include <algorithm>
#include <cmath>

#include "fermitheta/combinatorics.hpp"
#include "fermitheta/errors.hpp"
#include "fermitheta/graph.hpp"
#include "fermitheta/kernels.hpp"
#include "fermitheta/random.hpp"
#include "fermitheta/scheme.hpp"
#include "fermitheta/theta.hpp"

namespace fermitheta {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::syk: return "syk";
    case ModelKind::spin_glass: return "sg";
    case ModelKind::classical: return "classical";
  }
  return "syk";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "syk") return ModelKind::syk;
  if (text == "sg" || text == "spin-glass") return ModelKind::spin_glass;
  if (text == "classical") return ModelKind::classical;
  throw InputError("model must be one of syk, sg, classical");
}

std::size_t term_count(ModelKind kind, std::size_t n, std::size_t locality) {
  const auto ni = static_cast<std::int64_t>(n);
  const auto ki = static_cast<std::int64_t>(locality);
  const std::uint64_t c = binomial_u64(ni, ki);
  if (kind == ModelKind::spin_glass) {
    std::uint64_t p = 1;
    for (std::size_t i = 0; i < locality; ++i) p *= 3;
    return static_cast<std::size_t>(c * p);
  }
  return static_cast<std::size_t>(c);
}

// ---------------------------------------------------------------- ensemble

Ensemble::Ensemble(ModelKind kind, std::size_t n, std::size_t locality, std::uint64_t seed)
    : kind_(kind), n_(n), locality_(locality), seed_(seed) {
  if (n == 0) throw InputError("system size must be positive");
  if (locality == 0 || locality > n) throw InputError("locality must lie in [1, n]");
  switch (kind) {
    case ModelKind::syk:
      if (n % 2 != 0 || locality % 2 != 0) throw InputError("SYK needs even n and even q");
      if (n > 24) throw CapacityError("SYK limited to 24 modes (dimension 2^12)");
      strings_ = enumerate_set(OperatorKind::majorana, n, locality).hermitian_paulis();
      break;
    case ModelKind::spin_glass:
      if (n > 12) throw CapacityError("spin glass limited to 12 qubits");
      strings_ = enumerate_set(OperatorKind::pauli, n, locality).hermitian_paulis();
      break;
    case ModelKind::classical:
      if (n > 22) throw CapacityError("classical p-spin limited to 22 spins");
      for (const auto& s : combinations(static_cast<int>(n), static_cast<int>(locality))) {
        std::uint64_t mask = 0;
        for (int i : s) mask |= std::uint64_t{1} << (n - 1 - static_cast<std::size_t>(i));
        masks_.push_back(mask);
      }
      break;
  }
  terms_ = compile(strings_);
  m_ = quantum() ? terms_.size() : masks_.size();
  dim_ = quantum() ? terms_.front().dim : (std::size_t{1} << n);
}

DisorderSample Ensemble::draw(std::uint64_t stream) const {
  return {kind_, n_, locality_, seed_, stream, gaussian_stream(seed_, stream, m_)};
}

ComplexMatrix Ensemble::hamiltonian(std::span<const double> g, int threads) const {
  if (!quantum()) throw InputError("classical model has no dense Hamiltonian here; use classical_energies");
  const double scale = 1.0 / std::sqrt(static_cast<double>(m_));
  if (threads == 1) return kernels::assemble_hamiltonian_serial(terms_, g, scale);
  return kernels::assemble_hamiltonian_parallel(terms_, g, scale, threads);
}

std::vector<double> Ensemble::classical_energies(std::span<const double> g, int threads) const {
  if (quantum()) throw InputError("classical energies requested for a quantum model");
  if (g.size() != m_) throw InputError("coefficient count does not match term count");
  std::vector<double> f(dim_, 0.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m_));
  for (std::size_t i = 0; i < m_; ++i) f[masks_[i]] += scale * g[i];
  if (threads == 1) {
    kernels::walsh_hadamard_serial(f);
  } else {
    kernels::walsh_hadamard_parallel(f, threads);
  }
  return f;
}

RealVector Ensemble::spectrum(std::span<const double> g) const {
  if (!quantum()) {
    auto e = classical_energies(g);
    std::sort(e.begin(), e.end());
    return Eigen::Map<RealVector>(e.data(), static_cast<Eigen::Index>(e.size()));
  }
  return eigvalsh(DenseHermitian(hamiltonian(g)));
}

ModelInstance::ModelInstance(DisorderSample sample, ComplexMatrix h) : sample_(std::move(sample)), h_(std::move(h)) {}

const RealVector& ModelInstance::spectrum() const {
  if (!spectrum_) spectrum_ = eigvalsh(h_);
  return *spectrum_;
}

ModelInstance sample_syk(std::size_t n, std::size_t q, std::uint64_t seed, std::uint64_t stream) {
  const Ensemble e(ModelKind::syk, n, q, seed);
  auto s = e.draw(stream);
  auto h = e.hamiltonian(s.g);
  return ModelInstance(std::move(s), std::move(h));
}

ModelInstance sample_spin_glass(std::size_t n, std::size_t k, std::uint64_t seed, std::uint64_t stream) {
  const Ensemble e(ModelKind::spin_glass, n, k, seed);
  auto s = e.draw(stream);
  auto h = e.hamiltonian(s.g);
  return ModelInstance(std::move(s), std::move(h));
}

ClassicalSample sample_classical_pspin(std::size_t n, std::size_t p, std::uint64_t seed, std::uint64_t stream) {
  const Ensemble e(ModelKind::classical, n, p, seed);
  auto s = e.draw(stream);
  auto energies = e.classical_energies(s.g);
  return {std::move(s), std::move(energies)};
}

// ---------------------------------------------------------------- commutation degree

std::uint64_t h_comm_closed_form(ModelKind kind, std::size_t n, std::size_t locality) {
  const auto ni = static_cast<std::int64_t>(n);
  const auto k = static_cast<std::int64_t>(locality);
  std::uint64_t total = 0;
  switch (kind) {
    case ModelKind::syk:
      for (std::int64_t s = 1; s <= k; s += 2) total += binomial_u64(k, s) * binomial_u64(ni - k, k - s);
      return total;
    case ModelKind::spin_glass:
      for (std::int64_t s = 1; s <= k; ++s) {
        std::uint64_t p3s = 1;
        for (std::int64_t i = 0; i < s; ++i) p3s *= 3;
        std::uint64_t p3rest = 1;
        for (std::int64_t i = 0; i < k - s; ++i) p3rest *= 3;
        const std::uint64_t odd = (s % 2 == 1) ? (p3s + 1) / 2 : (p3s - 1) / 2;
        total += binomial_u64(k, s) * binomial_u64(ni - k, k - s) * p3rest * odd;
      }
      return total;
    case ModelKind::classical: return 0;
  }
  return 0;
}

std::uint64_t h_comm_count(ModelKind kind, std::size_t n, std::size_t locality) {
  if (kind == ModelKind::syk && (n % 2 != 0 || locality % 2 != 0)) throw InputError("SYK needs even n and even q");
  if (locality > n) throw InputError("locality exceeds system size");
  const std::uint64_t closed = h_comm_closed_form(kind, n, locality);
  if (kind != ModelKind::classical && term_count(kind, n, locality) <= 2000) {
    const auto set = enumerate_set(kind == ModelKind::syk ? OperatorKind::majorana : OperatorKind::pauli, n, locality);
    const auto degree = commutation_degree(commutation_graph(set));
    if (degree != closed) throw StructuralError("commutation degree disagrees with the closed form");
  }
  return closed;
}

LambdaMaxBound lambda_max_lower_bound(double m, double h_comm, double delta_upper, double c1) {
  if (!(c1 > 0.0)) throw InputError("c1 must be positive");
  if (!(m > 0.0) || !(h_comm > 0.0)) throw InputError("m and h_comm must be positive");
  if (delta_upper < 0.0) throw InputError("commutation index bound must be nonnegative");
  const double raw = std::sqrt(m) / (4.0 * std::sqrt(c1 * h_comm)) * (1.0 - 16.0 * delta_upper);
  const double bound = std::max(0.0, raw);
  return {bound, std::sqrt(m / (c1 * h_comm)), bound == 0.0};
}

// ---------------------------------------------------------------- circuit bounds

nlohmann::ordered_json BoundsReport::to_json() const {
  nlohmann::ordered_json j;
  j["inputs"] = {{"n", n}, {"q", q}, {"t", t}, {"gate_set", gate_set}, {"delta", delta}, {"c1", c1}};
  j["sigma2"] = sigma2;
  j["budget"] = budget;
  j["circuit_gate_threshold"] = circuit_gate_threshold;
  j["mps_bond_threshold"] = mps_bond_threshold;
  j["nn_weight_threshold"] = nn_weight_threshold;
  j["gaussian_state_excluded"] = gaussian_state_excluded;
  j["lambda_max_lower"] = lambda_max_lower;
  j["beta_max"] = beta_max;
  j["regime"] = lambda_max_lower > 0.0 ? "nontrivial" : "vacuous";
  return j;
}

BoundsReport ansatz_bounds_report_with_rate(std::size_t n, std::size_t q, double t, double gate_set, double delta,
                                            double sigma2, double c1) {
  if (n < 2 || q == 0 || q > n) throw InputError("need 0 < q <= n and n >= 2");
  if (!(t > 0.0)) throw InputError("t must be positive");
  if (!(gate_set >= 2.0)) throw InputError("gate set size must be at least 2");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("failure probability must lie in (0, 1)");
  if (!(sigma2 > 0.0)) throw InputError("concentration rate must be positive");
  BoundsReport r{};
  r.n = n;
  r.q = q;
  r.t = t;
  r.gate_set = gate_set;
  r.delta = delta;
  r.c1 = c1;
  r.sigma2 = sigma2;
  const double nd = static_cast<double>(n);
  r.budget = t * t * nd / (2.0 * sigma2) + std::log(delta);
  const double per_gate = std::log(gate_set * nd * (nd - 1.0) / 2.0);
  r.circuit_gate_threshold = r.budget > 0.0 ? static_cast<std::uint64_t>(std::floor(r.budget / per_gate)) : 0;
  const double chi_budget = r.budget - std::log(nd);
  r.mps_bond_threshold = chi_budget > 0.0 ? static_cast<std::uint64_t>(std::floor(std::sqrt(chi_budget))) : 0;
  r.nn_weight_threshold = r.budget > 0.0 ? static_cast<std::uint64_t>(std::floor(r.budget)) : 0;
  r.gaussian_state_excluded = r.budget > nd * nd;
  const double m = binomial_double(static_cast<std::int64_t>(n), static_cast<std::int64_t>(q));
  const auto h = static_cast<double>(h_comm_closed_form(ModelKind::syk, n, q));
  if (h > 0.0) {
    const auto lb = lambda_max_lower_bound(m, h, sigma2, c1);
    r.lambda_max_lower = lb.bound;
    r.beta_max = lb.beta_max;
  }
  return r;
}

BoundsReport ansatz_bounds_report(std::size_t n, std::size_t q, double t, double gate_set, double delta, double c1) {
  if (n % 2 != 0 || q % 2 != 0) throw InputError("need even n and even q");
  const auto theta = theta_johnson_lp(static_cast<int>(n), static_cast<int>(q));
  const double sigma2 = mpq_class(*theta.exact / mpq_class(binomial_mpz(static_cast<long>(n), static_cast<long>(q)))).get_d();
  return ansatz_bounds_report_with_rate(n, q, t, gate_set, delta, sigma2, c1);
}

// ---------------------------------------------------------------- depolarizing identity

DepolarizedIdentity depolarized_energy_identity(const std::vector<PauliString>& terms, const std::vector<double>& coeffs,
                                                const ComplexVector& phi) {
  if (terms.empty() || terms.size() != coeffs.size()) throw InputError("need one coefficient per term");
  const std::size_t n = terms.front().n_qubits();
  const std::size_t k = terms.front().weight();
  if (n > 10) throw CapacityError("depolarizing identity limited to 10 qubits");
  for (const auto& p : terms) {
    if (p.n_qubits() != n) throw InputError("terms act on different qubit counts");
    if (p.weight() != k || k == 0) throw InputError("Hamiltonian is not exactly k-local");
    if (!p.is_hermitian()) throw InputError("terms must be Hermitian");
  }
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  if (phi.size() != dim) throw InputError("state dimension mismatch");
  if (std::abs(phi.norm() - 1.0) > 1e-10) throw InputError("state must be normalized");

  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < terms.size(); ++i) CompiledPauli(terms[i]).add_to(h, coeffs[i]);

  // rho <- rho/3 + (2/3) Tr_q(rho) (x) I/2 on each qubit.
  ComplexMatrix rho = phi * phi.adjoint();
  for (std::size_t q = 0; q < n; ++q) {
    const Eigen::Index bit = Eigen::Index{1} << (n - 1 - q);
    ComplexMatrix next = rho / 3.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (((i & bit) != 0) != ((j & bit) != 0)) continue;
        const Complex traced = rho(i & ~bit, j & ~bit) + rho(i | bit, j | bit);
        next(i, j) += (2.0 / 3.0) * 0.5 * traced;
      }
    }
    rho = std::move(next);
  }
  const double lhs = (h * rho).trace().real();
  const double rhs = std::pow(3.0, -static_cast<double>(k)) * phi.dot(h * phi).real();
  return {lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace fermitheta
