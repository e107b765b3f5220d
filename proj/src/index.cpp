#include "fermitheta/index.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "fermitheta/combinatorics.hpp"
#include "fermitheta/errors.hpp"
#include "fermitheta/graph.hpp"
#include "fermitheta/random.hpp"
#include "fermitheta/scheme.hpp"

namespace fermitheta {

namespace {

ComplexVector random_state(std::size_t dim, RandomStream& rng) {
  ComplexVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(rng.gaussian(), rng.gaussian());
  return v / v.norm();
}

bool is_full_majorana(const OperatorSet& set) {
  return set.kind() == OperatorKind::majorana && set.n() % 2 == 0 && set.locality() % 2 == 0 &&
         set.size() == binomial_u64(static_cast<std::int64_t>(set.n()), static_cast<std::int64_t>(set.locality()));
}

void require_dim(const OperatorSet& set, std::size_t max_qubits, const char* what) {
  if (set.n_qubits() > max_qubits) throw CapacityError(std::string(what) + " limited to 2^" + std::to_string(max_qubits));
}

mpq_class ratio(std::size_t num, std::size_t den) {
  mpq_class q(static_cast<unsigned long>(num), static_cast<unsigned long>(den));
  q.canonicalize();
  return q;
}

}  // namespace

double mean_squared_expectation(std::span<const CompiledPauli> ops, const ComplexVector& psi) {
  if (ops.empty()) throw InputError("operator set is empty");
  double acc = 0.0;
  for (const auto& a : ops) {
    const double e = a.expectation(psi).real();
    acc += e * e;
  }
  return acc / static_cast<double>(ops.size());
}

// ---------------------------------------------------------------- upper

IndexUpper index_upper(const OperatorSet& set, double tol) {
  if (set.size() == 0) throw InputError("operator set is empty");
  if (is_full_majorana(set)) {
    auto theta = theta_johnson_lp(static_cast<int>(set.n()), static_cast<int>(set.locality()));
    mpq_class v = *theta.exact / mpq_class(static_cast<unsigned long>(set.size()));
    v.canonicalize();
    return {v.get_d(), v, std::move(theta)};
  }
  auto theta = theta_sdp(commutation_graph(set), tol);
  // The dual bracket end is a valid upper bound regardless of convergence.
  return {theta.upper / static_cast<double>(set.size()), std::nullopt, std::move(theta)};
}

// ---------------------------------------------------------------- lower

MajoranaLower index_lower_majorana(int n, int q) {
  if (n <= 0 || n % 2 != 0 || q < 0 || q % 2 != 0 || q > n) throw InputError("need even 0 <= q <= n with n > 0");
  MajoranaLower out;
  out.value = mpq_class(binomial_mpz(n / 2, q / 2), binomial_mpz(n, q));
  out.value.canonicalize();
  if (q > 0 && (std::size_t{1} << (n / 2)) <= kSoftDimCap) {
    const auto family = commuting_majorana_family(static_cast<std::size_t>(n), static_cast<std::size_t>(q));
    const ComplexVector psi = stabilized_state(family);
    const auto all = enumerate_set(OperatorKind::majorana, static_cast<std::size_t>(n), static_cast<std::size_t>(q));
    const auto ops = compile(all.hermitian_paulis());
    out.witness_value = mean_squared_expectation(ops, psi);
    out.witness_checked = out.witness_value >= out.value.get_d() - 1e-9;
  }
  return out;
}

LowerCertificate certify_commuting_subset(const OperatorSet& set, const std::vector<std::size_t>& members,
                                          std::string source) {
  require_dim(set, 12, "lower-bound certification");
  if (members.empty()) throw InputError("certificate needs at least one member");
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      if (set.anticommutes(members[a], members[b])) throw InputError("certificate members must commute");
    }
  }
  const auto all = set.hermitian_paulis();
  std::vector<PauliString> chosen;
  for (auto i : members) chosen.push_back(all[i]);
  const OperatorSet family(set.n_qubits(), set.locality(), std::move(chosen), Provenance::custom);
  const JointEigenstate joint = joint_eigenstate(family);
  const auto ops = compile(all);
  for (auto i : members) {
    if (std::abs(ops[i].expectation(joint.psi).real()) < 1.0 - 1e-9) {
      throw StructuralError("joint eigenstate failed to saturate a commuting member");
    }
  }
  LowerCertificate out{ratio(members.size(), set.size()), members, std::move(source), 0.0, joint.psi};
  out.witness_value = mean_squared_expectation(ops, joint.psi);
  return out;
}

LowerCertificate certify_from_state(const OperatorSet& set, const ComplexVector& psi, double tol) {
  const auto ops = compile(set.hermitian_paulis());
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (std::abs(ops[i].expectation(psi).real()) >= 1.0 - tol) members.push_back(i);
  }
  if (members.empty()) {
    // Any single member is a valid one-element certificate.
    members.push_back(0);
  }
  return certify_commuting_subset(set, members, "saturated-in-state");
}

LowerCertificate certify_from_independent_set(const OperatorSet& set) {
  const auto mis = maximum_independent_set(commutation_graph(set));
  return certify_commuting_subset(set, mis.vertices, mis.optimal ? "maximum-commuting-subset" : "commuting-subset");
}

// ---------------------------------------------------------------- product states

double index_pauli_product(std::size_t n, std::size_t k, const std::vector<QubitState>& factors) {
  if (factors.size() != n) throw InputError("need one single-qubit factor per qubit");
  if (k > n) throw InputError("locality exceeds qubit count");
  // Per-qubit sum of squared Pauli expectations: <X>^2 + <Y>^2 + <Z>^2.
  std::vector<double> purity(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = factors[i];
    if (std::abs(f.norm() - 1.0) > 1e-10) throw InputError("product-state factor is not normalized");
    const Complex a = f[0];
    const Complex b = f[1];
    const double x = 2.0 * (std::conj(a) * b).real();
    const double y = 2.0 * (std::conj(a) * b).imag();
    const double z = std::norm(a) - std::norm(b);
    purity[i] = x * x + y * y + z * z;
  }
  double total = 0.0;
  for (const auto& support : combinations(static_cast<int>(n), static_cast<int>(k))) {
    double prod = 1.0;
    for (int i : support) prod *= purity[static_cast<std::size_t>(i)];
    total += prod;
  }
  return total / (binomial_double(static_cast<std::int64_t>(n), static_cast<std::int64_t>(k)) * std::pow(3.0, static_cast<double>(k)));
}

double pauli_index_weak_bound(std::size_t k) { return std::pow(2.0 / 3.0, static_cast<double>(k)); }

// ---------------------------------------------------------------- see-saw

namespace {

// Eigenvector of the largest eigenvalue of M = (1/m) sum_i w_i A_i.
ComplexVector seesaw_step(std::span<const CompiledPauli> ops, const std::vector<double>& w, const ComplexVector& start) {
  const std::size_t dim = ops.front().dim;
  const double inv_m = 1.0 / static_cast<double>(ops.size());
  if (dim <= 1024) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (w[i] != 0.0) ops[i].add_to(m, w[i] * inv_m);
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
    return solver.eigenvectors().col(static_cast<Eigen::Index>(dim) - 1);
  }
  // Shifted power iteration for larger dimensions.
  double shift = 0.0;
  for (double wi : w) shift += std::abs(wi) * inv_m;
  ComplexVector v = start;
  ComplexVector tmp;
  for (int t = 0; t < 300; ++t) {
    ComplexVector acc = shift * v;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (w[i] == 0.0) continue;
      ops[i].apply(v, tmp);
      acc += (w[i] * inv_m) * tmp;
    }
    v = acc / acc.norm();
  }
  return v;
}

}  // namespace

SeesawResult index_seesaw(const OperatorSet& set, int restarts, int iters, std::uint64_t seed) {
  if (set.size() == 0) throw InputError("operator set is empty");
  if (restarts < 1 || iters < 1) throw InputError("see-saw needs positive restarts and iterations");
  require_dim(set, 12, "see-saw");
  const auto ops = compile(set.hermitian_paulis());
  SeesawResult best;
  best.value = -1.0;
  best.restarts = restarts;
  bool monotone = true;
  for (int r = 0; r < restarts; ++r) {
    RandomStream rng(seed, static_cast<std::uint64_t>(r));
    ComplexVector psi = random_state(ops.front().dim, rng);
    std::vector<double> w(ops.size());
    std::vector<double> traj;
    double value = 0.0;
    for (int it = 0; it < iters; ++it) {
      double acc = 0.0;
      for (std::size_t i = 0; i < ops.size(); ++i) {
        w[i] = ops[i].expectation(psi).real();
        acc += w[i] * w[i];
      }
      const double current = acc / static_cast<double>(ops.size());
      if (!traj.empty() && current < traj.back() - 1e-12) monotone = false;
      traj.push_back(current);
      const double gain = traj.size() > 1 ? current - traj[traj.size() - 2] : 1.0;
      value = current;
      if (traj.size() > 1 && gain < 1e-12) break;
      psi = seesaw_step(ops, w, psi);
    }
    if (value > best.value) {
      best.value = value;
      best.state = psi;
      best.trajectory = std::move(traj);
    }
  }
  best.monotone = monotone;
  return best;
}

// ---------------------------------------------------------------- off-diagonal variant

nlohmann::ordered_json OffdiagReport::to_json() const {
  return {{"estimate", estimate}, {"upper", upper}, {"bound", bound}, {"passed", passed}, {"trials", trials}};
}

OffdiagReport offdiag_index_check(const OperatorSet& set, int trials, std::uint64_t seed) {
  if (trials < 1) throw InputError("need at least one trial");
  require_dim(set, 10, "off-diagonal index check");
  const auto ops = compile(set.hermitian_paulis());
  const double inv_m = 1.0 / static_cast<double>(ops.size());
  auto objective = [&](const ComplexVector& u, const ComplexVector& v) {
    double acc = 0.0;
    for (const auto& a : ops) acc += std::norm(u.dot(a.apply(v)));
    return acc * inv_m;
  };
  // Power step for u at fixed v: u <- sum_i conj(<u|A_i|v>) A_i v.
  auto improve = [&](const ComplexVector& u, const ComplexVector& v) {
    ComplexVector acc = ComplexVector::Zero(u.size());
    for (const auto& a : ops) {
      const ComplexVector av = a.apply(v);
      acc += std::conj(u.dot(av)) * av;
    }
    const double nrm = acc.norm();
    return nrm > 0.0 ? ComplexVector(acc / nrm) : u;
  };
  OffdiagReport rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    RandomStream rng(seed, static_cast<std::uint64_t>(t));
    ComplexVector u = random_state(ops.front().dim, rng);
    ComplexVector v = random_state(ops.front().dim, rng);
    double prev = objective(u, v);
    for (int it = 0; it < 200; ++it) {
      u = improve(u, v);
      // Same step with the roles swapped: |<u|A|v>| = |<v|A|u>| for Hermitian A.
      v = improve(v, u);
      const double cur = objective(u, v);
      if (cur - prev < 1e-12) {
        prev = std::max(prev, cur);
        break;
      }
      prev = cur;
    }
    rep.estimate = std::max(rep.estimate, prev);
  }
  rep.upper = index_upper(set).value;
  rep.bound = 16.0 * rep.upper + 1e-9;
  rep.passed = rep.estimate <= rep.bound;
  return rep;
}

// ---------------------------------------------------------------- combined estimate

IndexMethod parse_index_method(std::string_view text) {
  if (text == "upper") return IndexMethod::upper;
  if (text == "lower") return IndexMethod::lower;
  if (text == "seesaw") return IndexMethod::seesaw;
  if (text == "all") return IndexMethod::all;
  throw InputError("index method must be one of upper, lower, seesaw, all");
}

nlohmann::ordered_json IndexEstimate::to_json() const {
  nlohmann::ordered_json j;
  j["upper"] = upper;
  j["upper_exact"] = upper_exact ? nlohmann::ordered_json(upper_exact->get_str()) : nlohmann::ordered_json(nullptr);
  j["lower"] = lower;
  j["lower_exact"] = lower_exact ? nlohmann::ordered_json(lower_exact->get_str()) : nlohmann::ordered_json(nullptr);
  j["lower_source"] = lower_source;
  j["heuristic"] = heuristic;
  j["exact"] = exact ? nlohmann::ordered_json(*exact) : nlohmann::ordered_json(nullptr);
  j["exact_rational"] = exact_rational ? nlohmann::ordered_json(exact_rational->get_str()) : nlohmann::ordered_json(nullptr);
  j["witness_dim"] = witness.size();
  return j;
}

IndexEstimate estimate_index(const OperatorSet& set, IndexMethod method, std::uint64_t seed) {
  IndexEstimate est;
  const bool want_upper = method == IndexMethod::upper || method == IndexMethod::all;
  const bool want_lower = method == IndexMethod::lower || method == IndexMethod::all;
  const bool want_seesaw = method == IndexMethod::seesaw || method == IndexMethod::all;

  if (want_upper) {
    const auto up = index_upper(set);
    est.upper = up.value;
    est.upper_exact = up.exact;
  }
  std::optional<SeesawResult> seesaw;
  if (want_seesaw || want_lower) {
    if (set.n_qubits() <= 12) seesaw = index_seesaw(set, 8, 200, seed);
  }
  if (want_lower) {
    std::optional<LowerCertificate> best;
    auto consider = [&](LowerCertificate c) {
      if (!best || c.value > best->value) best = std::move(c);
    };
    if (set.n_qubits() <= 12) {
      if (set.size() <= 256) consider(certify_from_independent_set(set));
      if (seesaw) consider(certify_from_state(set, seesaw->state));
    }
    if (is_full_majorana(set)) {
      const auto ml = index_lower_majorana(static_cast<int>(set.n()), static_cast<int>(set.locality()));
      if (!best || ml.value > best->value) {
        est.lower_exact = ml.value;
        est.lower = ml.value.get_d();
        est.lower_source = "commuting-pair-products";
      }
    }
    if (best && (!est.lower_exact || best->value > *est.lower_exact)) {
      est.lower_exact = best->value;
      est.lower = best->value.get_d();
      est.lower_source = best->source;
      est.witness = best->witness;
      est.heuristic = best->witness_value;
    }
  }
  if (seesaw && seesaw->value >= est.heuristic) {
    est.heuristic = seesaw->value;
    est.witness = seesaw->state;
  }
  if (want_upper && want_lower) {
    if (est.upper_exact && est.lower_exact && *est.upper_exact == *est.lower_exact) {
      est.exact_rational = est.upper_exact;
      est.exact = est.upper;
    } else if (est.upper - est.lower <= 1e-9) {
      est.exact = est.lower;
    }
  }
  return est;
}

}  // namespace fermitheta
