#include "fermitheta/algebra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "fermitheta/combinatorics.hpp"
#include "fermitheta/errors.hpp"

namespace fermitheta {

namespace {

Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

int mod4(int k) { return ((k % 4) + 4) % 4; }

}  // namespace

// ---------------------------------------------------------------- BitVec

void BitVec::set(std::size_t i, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << (i % 64);
  if (value) {
    words_[i / 64] |= bit;
  } else {
    words_[i / 64] &= ~bit;
  }
}

std::size_t BitVec::popcount() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool BitVec::none() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t BitVec::and_count(const BitVec& a, const BitVec& b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.words_.size(); ++i) {
    c += static_cast<std::size_t>(std::popcount(a.words_[i] & b.words_[i]));
  }
  return c;
}

BitVec& BitVec::operator^=(const BitVec& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

BitVec operator&(const BitVec& a, const BitVec& b) {
  BitVec r(a.size_);
  for (std::size_t i = 0; i < a.words_.size(); ++i) r.words_[i] = a.words_[i] & b.words_[i];
  return r;
}

BitVec operator|(const BitVec& a, const BitVec& b) {
  BitVec r(a.size_);
  for (std::size_t i = 0; i < a.words_.size(); ++i) r.words_[i] = a.words_[i] | b.words_[i];
  return r;
}

// ---------------------------------------------------------------- PauliString

PauliString::PauliString(std::size_t n_qubits) : x_(n_qubits), z_(n_qubits) {
  if (n_qubits == 0) throw InputError("PauliString needs at least one qubit");
}

PauliString::PauliString(BitVec x, BitVec z, int phase)
    : x_(std::move(x)), z_(std::move(z)), phase_(mod4(phase)) {
  if (x_.size() != z_.size()) throw InputError("x and z masks differ in length");
  if (x_.size() == 0) throw InputError("PauliString needs at least one qubit");
}

PauliString PauliString::from_letters(std::string_view letters, int letter_phase) {
  BitVec x(letters.size());
  BitVec z(letters.size());
  int y_count = 0;
  for (std::size_t q = 0; q < letters.size(); ++q) {
    switch (letters[q]) {
      case 'I': break;
      case 'X': x.set(q); break;
      case 'Z': z.set(q); break;
      case 'Y':
        x.set(q);
        z.set(q);
        ++y_count;
        break;
      default: throw InputError("Pauli letters must be one of I, X, Y, Z");
    }
  }
  return PauliString(std::move(x), std::move(z), letter_phase + y_count);
}

int PauliString::letter_phase() const {
  return mod4(phase_ - static_cast<int>(BitVec::and_count(x_, z_)));
}

char PauliString::letter(std::size_t qubit) const {
  const bool xb = x_.test(qubit);
  const bool zb = z_.test(qubit);
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

std::string PauliString::letters() const {
  std::string s(n_qubits(), 'I');
  for (std::size_t q = 0; q < n_qubits(); ++q) s[q] = letter(q);
  return s;
}

std::size_t PauliString::weight() const { return (x_ | z_).popcount(); }

bool PauliString::is_hermitian() const {
  return (phase_ + static_cast<int>(BitVec::and_count(x_, z_))) % 2 == 0;
}

// ---------------------------------------------------------------- MajoranaMonomial

MajoranaMonomial::MajoranaMonomial(std::size_t n_modes, std::span<const int> one_based_modes)
    : n_modes_(n_modes), mask_(n_modes) {
  if (n_modes == 0 || n_modes % 2 != 0) throw InputError("number of Majorana modes must be positive and even");
  modes_.reserve(one_based_modes.size());
  int prev = 0;
  for (int j : one_based_modes) {
    if (j < 1 || static_cast<std::size_t>(j) > n_modes) throw InputError("Majorana index out of range");
    if (j <= prev) throw InputError("Majorana indices must be strictly increasing");
    prev = j;
    modes_.push_back(j - 1);
    mask_.set(static_cast<std::size_t>(j - 1));
  }
}

std::vector<int> MajoranaMonomial::one_based() const {
  std::vector<int> out(modes_.begin(), modes_.end());
  for (auto& j : out) ++j;
  return out;
}

// ---------------------------------------------------------------- OperatorSet

std::string to_string(OperatorKind kind) { return kind == OperatorKind::pauli ? "pauli" : "majorana"; }

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::enumerated: return "enumerated";
    case Provenance::ternary_tree: return "ternary-tree";
    case Provenance::commuting_family: return "commuting-family";
    case Provenance::custom: return "custom";
  }
  return "custom";
}

OperatorKind parse_operator_kind(std::string_view text) {
  if (text == "pauli") return OperatorKind::pauli;
  if (text == "majorana") return OperatorKind::majorana;
  throw InputError("operator kind must be 'pauli' or 'majorana'");
}

OperatorSet::OperatorSet(std::size_t n, std::size_t locality, std::vector<PauliString> members,
                         Provenance provenance)
    : n_(n), locality_(locality), provenance_(provenance), members_(std::move(members)) {
  const auto& ps = std::get<0>(members_);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].n_qubits() != n) throw InputError("Pauli set members must share the qubit count");
    for (std::size_t j = 0; j < i; ++j) {
      if (ps[i].x_mask() == ps[j].x_mask() && ps[i].z_mask() == ps[j].z_mask()) {
        throw InputError("duplicate member in operator set");
      }
    }
  }
}

OperatorSet::OperatorSet(std::size_t n, std::size_t locality, std::vector<MajoranaMonomial> members,
                         Provenance provenance)
    : n_(n), locality_(locality), provenance_(provenance), members_(std::move(members)) {
  const auto& ms = std::get<1>(members_);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i].n_modes() != n) throw InputError("Majorana set members must share the mode count");
    for (std::size_t j = 0; j < i; ++j) {
      if (ms[i] == ms[j]) throw InputError("duplicate member in operator set");
    }
  }
}

OperatorKind OperatorSet::kind() const {
  return members_.index() == 0 ? OperatorKind::pauli : OperatorKind::majorana;
}

std::size_t OperatorSet::size() const {
  return std::visit([](const auto& v) { return v.size(); }, members_);
}

const std::vector<PauliString>& OperatorSet::paulis() const {
  if (kind() != OperatorKind::pauli) throw InputError("operator set is not a Pauli set");
  return std::get<0>(members_);
}

const std::vector<MajoranaMonomial>& OperatorSet::majoranas() const {
  if (kind() != OperatorKind::majorana) throw InputError("operator set is not a Majorana set");
  return std::get<1>(members_);
}

bool OperatorSet::anticommutes(std::size_t i, std::size_t j) const {
  if (kind() == OperatorKind::pauli) {
    const auto& ps = std::get<0>(members_);
    return pauli_anticommutes(ps[i], ps[j]);
  }
  const auto& ms = std::get<1>(members_);
  return majorana_anticommutes(ms[i], ms[j]);
}

std::size_t OperatorSet::n_qubits() const { return kind() == OperatorKind::pauli ? n_ : n_ / 2; }

std::vector<PauliString> OperatorSet::hermitian_paulis() const {
  std::vector<PauliString> out;
  out.reserve(size());
  if (kind() == OperatorKind::pauli) {
    for (const auto& p : std::get<0>(members_)) {
      if (!p.is_hermitian()) throw InputError("Pauli set member is not Hermitian");
      out.push_back(p);
    }
  } else {
    for (const auto& m : std::get<1>(members_)) out.push_back(to_pauli(m, true));
  }
  return out;
}

// ---------------------------------------------------------------- predicates and products

bool pauli_anticommutes(const PauliString& p, const PauliString& q) {
  if (p.n_qubits() != q.n_qubits()) throw InputError("Pauli strings act on different qubit counts");
  const auto s = BitVec::and_count(p.x_mask(), q.z_mask()) + BitVec::and_count(q.x_mask(), p.z_mask());
  return s % 2 == 1;
}

bool majorana_anticommutes(const MajoranaMonomial& s, const MajoranaMonomial& t) {
  if (s.n_modes() != t.n_modes()) throw InputError("Majorana monomials act on different mode counts");
  const auto overlap = BitVec::and_count(s.mask(), t.mask());
  return (s.degree() * t.degree() - overlap) % 2 == 1;
}

PauliString multiply_paulis(const PauliString& p, const PauliString& q) {
  if (p.n_qubits() != q.n_qubits()) throw InputError("Pauli strings act on different qubit counts");
  // X^a Z^b X^c Z^d = (-1)^{b.c} X^{a+c} Z^{b+d}
  const int swap_sign = static_cast<int>(BitVec::and_count(p.z_mask(), q.x_mask()) % 2);
  return PauliString(p.x_mask() ^ q.x_mask(), p.z_mask() ^ q.z_mask(), p.phase() + q.phase() + 2 * swap_sign);
}

PauliString jordan_wigner_majorana(int mode, std::size_t n_modes) {
  if (n_modes == 0 || n_modes % 2 != 0) throw InputError("number of Majorana modes must be positive and even");
  if (mode < 1 || static_cast<std::size_t>(mode) > n_modes) throw InputError("Majorana index out of range");
  const std::size_t n_qubits = n_modes / 2;
  const auto site = static_cast<std::size_t>((mode - 1) / 2);
  BitVec x(n_qubits);
  BitVec z(n_qubits);
  for (std::size_t q = 0; q < site; ++q) z.set(q);
  x.set(site);
  int phase = 0;
  if (mode % 2 == 0) {  // Y = i X Z
    z.set(site);
    phase = 1;
  }
  return PauliString(std::move(x), std::move(z), phase);
}

PauliString to_pauli(const MajoranaMonomial& monomial, bool hermitize) {
  const std::size_t q = monomial.degree();
  if (hermitize && q % 2 != 0) throw InputError("hermitizing phase i^{q/2} needs even degree");
  PauliString acc(monomial.n_modes() / 2);
  for (int j : monomial.modes()) acc = multiply_paulis(acc, jordan_wigner_majorana(j + 1, monomial.n_modes()));
  if (hermitize) acc = acc.with_phase(acc.phase() + static_cast<int>(q / 2));
  return acc;
}

// ---------------------------------------------------------------- dense materialization

namespace {

std::size_t checked_dim(std::size_t n_qubits) {
  if (n_qubits >= 63 || (std::size_t{1} << n_qubits) > kHardDimCap) {
    throw CapacityError("dense dimension 2^" + std::to_string(n_qubits) + " exceeds the 2^14 cap");
  }
  return std::size_t{1} << n_qubits;
}

}  // namespace

CompiledPauli::CompiledPauli(const PauliString& p) : coeff(i_power(p.phase())) {
  const std::size_t n = p.n_qubits();
  dim = checked_dim(n);
  for (std::size_t q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    if (p.x_mask().test(q)) x |= bit;
    if (p.z_mask().test(q)) z |= bit;
  }
}

void CompiledPauli::apply(const ComplexVector& in, ComplexVector& out) const {
  out.resize(static_cast<Eigen::Index>(dim));
  for (std::uint64_t b = 0; b < dim; ++b) {
    const double sign = (std::popcount(z & b) & 1) ? -1.0 : 1.0;
    out[static_cast<Eigen::Index>(b ^ x)] = coeff * sign * in[static_cast<Eigen::Index>(b)];
  }
}

ComplexVector CompiledPauli::apply(const ComplexVector& in) const {
  ComplexVector out;
  apply(in, out);
  return out;
}

Complex CompiledPauli::expectation(const ComplexVector& psi) const {
  Complex acc{0.0, 0.0};
  for (std::uint64_t b = 0; b < dim; ++b) {
    const double sign = (std::popcount(z & b) & 1) ? -1.0 : 1.0;
    acc += std::conj(psi[static_cast<Eigen::Index>(b ^ x)]) * sign * psi[static_cast<Eigen::Index>(b)];
  }
  return coeff * acc;
}

void CompiledPauli::add_to(ComplexMatrix& m, Complex weight) const {
  const Complex w = weight * coeff;
  for (std::uint64_t b = 0; b < dim; ++b) {
    const double sign = (std::popcount(z & b) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) += sign * w;
  }
}

std::vector<CompiledPauli> compile(std::span<const PauliString> ops) {
  std::vector<CompiledPauli> out;
  out.reserve(ops.size());
  for (const auto& p : ops) out.emplace_back(p);
  return out;
}

ComplexMatrix materialize(const PauliString& p) {
  const CompiledPauli c(p);
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(c.dim), static_cast<Eigen::Index>(c.dim));
  c.add_to(m, 1.0);
  return m;
}

ComplexMatrix materialize(const MajoranaMonomial& monomial, bool hermitize) {
  return materialize(to_pauli(monomial, hermitize));
}

// ---------------------------------------------------------------- enumeration

OperatorSet enumerate_set(OperatorKind kind, std::size_t n, std::size_t locality) {
  if (n == 0) throw InputError("system size must be positive");
  if (locality > n) throw InputError("locality exceeds system size");
  const auto ni = static_cast<int>(n);
  const auto ki = static_cast<int>(locality);
  if (kind == OperatorKind::majorana) {
    if (n % 2 != 0) throw InputError("number of Majorana modes must be even");
    if (binomial_double(ni, ki) > static_cast<double>(kMaxEnumeration)) {
      throw CapacityError("Majorana enumeration exceeds 10^6 members");
    }
    std::vector<MajoranaMonomial> members;
    for (auto c : combinations(ni, ki)) {
      for (auto& j : c) ++j;
      members.emplace_back(n, std::span<const int>(c));
    }
    return OperatorSet(n, locality, std::move(members), Provenance::enumerated);
  }

  if (binomial_double(ni, ki) * std::pow(3.0, ki) > static_cast<double>(kMaxEnumeration)) {
    throw CapacityError("Pauli enumeration exceeds 10^6 members");
  }
  static constexpr char kLetters[3] = {'X', 'Y', 'Z'};
  std::vector<PauliString> members;
  std::size_t letter_tuples = 1;
  for (std::size_t i = 0; i < locality; ++i) letter_tuples *= 3;
  for (const auto& support : combinations(ni, ki)) {
    for (std::size_t code = 0; code < letter_tuples; ++code) {
      std::string s(n, 'I');
      std::size_t rest = code;
      for (std::size_t pos = locality; pos-- > 0;) {
        s[static_cast<std::size_t>(support[pos])] = kLetters[rest % 3];
        rest /= 3;
      }
      members.push_back(PauliString::from_letters(s));
    }
  }
  return OperatorSet(n, locality, std::move(members), Provenance::enumerated);
}

}  // namespace fermitheta
