#pragma once

// Pauli strings, Majorana monomials, and the operator families built from them.
//
// Conventions:
//  * A PauliString is i^phase * X^x * Z^z (X part left of Z part), so the
//    single-qubit Y is stored as x=z=1 with phase 1. letters() / from_letters()
//    speak the literal {I,X,Y,Z} alphabet with a separate prefactor.
//  * Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
//    computational-basis index.
//  * Majorana modes are 1-based at every public boundary (constructors, JSON,
//    CLI) and 0-based in storage. Jordan-Wigner maps gamma_{2t-1} to
//    Z..Z X and gamma_{2t} to Z..Z Y on qubit t-1.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace fermitheta {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr std::size_t kSoftDimCap = std::size_t{1} << 12;
inline constexpr std::size_t kHardDimCap = std::size_t{1} << 14;
inline constexpr std::size_t kMaxEnumeration = 1'000'000;

// Packed bit vector with the handful of operations the symplectic algebra needs.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  void set(std::size_t i, bool value = true);
  std::size_t popcount() const;
  bool none() const;

  // popcount(a & b)
  static std::size_t and_count(const BitVec& a, const BitVec& b);

  BitVec& operator^=(const BitVec& other);
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
  friend BitVec operator&(const BitVec& a, const BitVec& b);
  friend BitVec operator|(const BitVec& a, const BitVec& b);
  friend bool operator==(const BitVec&, const BitVec&) = default;

  std::span<const std::uint64_t> words() const { return words_; }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

class PauliString {
 public:
  // Identity on n qubits.
  explicit PauliString(std::size_t n_qubits);
  PauliString(BitVec x, BitVec z, int phase);

  // Literal letters over {I,X,Y,Z}, multiplied by i^letter_phase.
  static PauliString from_letters(std::string_view letters, int letter_phase = 0);

  std::size_t n_qubits() const { return x_.size(); }
  const BitVec& x_mask() const { return x_; }
  const BitVec& z_mask() const { return z_; }
  int phase() const { return phase_; }
  // Prefactor exponent relative to the literal letters (Y = i X Z absorbed).
  int letter_phase() const;
  char letter(std::size_t qubit) const;
  std::string letters() const;
  std::size_t weight() const;
  bool is_hermitian() const;
  PauliString with_phase(int phase) const { return PauliString(x_, z_, phase); }

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  BitVec x_;
  BitVec z_;
  int phase_ = 0;  // exponent of i, in [0, 4)
};

class MajoranaMonomial {
 public:
  // modes: strictly increasing, 1-based, each in [1, n_modes]; n_modes even.
  MajoranaMonomial(std::size_t n_modes, std::span<const int> one_based_modes);
  MajoranaMonomial(std::size_t n_modes, std::initializer_list<int> one_based_modes)
      : MajoranaMonomial(n_modes, std::span<const int>(one_based_modes.begin(), one_based_modes.size())) {}

  std::size_t n_modes() const { return n_modes_; }
  std::size_t degree() const { return modes_.size(); }
  // 0-based storage.
  std::span<const int> modes() const { return modes_; }
  std::vector<int> one_based() const;
  const BitVec& mask() const { return mask_; }

  friend bool operator==(const MajoranaMonomial& a, const MajoranaMonomial& b) {
    return a.n_modes_ == b.n_modes_ && a.modes_ == b.modes_;
  }

 private:
  std::size_t n_modes_;
  std::vector<int> modes_;
  BitVec mask_;
};

enum class OperatorKind { pauli, majorana };
enum class Provenance { enumerated, ternary_tree, commuting_family, custom };

std::string to_string(OperatorKind kind);
std::string to_string(Provenance provenance);
OperatorKind parse_operator_kind(std::string_view text);

class OperatorSet {
 public:
  OperatorSet(std::size_t n, std::size_t locality, std::vector<PauliString> members,
              Provenance provenance);
  OperatorSet(std::size_t n, std::size_t locality, std::vector<MajoranaMonomial> members,
              Provenance provenance);

  OperatorKind kind() const;
  std::size_t n() const { return n_; }
  std::size_t locality() const { return locality_; }
  Provenance provenance() const { return provenance_; }
  std::size_t size() const;

  const std::vector<PauliString>& paulis() const;
  const std::vector<MajoranaMonomial>& majoranas() const;

  bool anticommutes(std::size_t i, std::size_t j) const;
  // Qubits needed to represent the members as Pauli strings.
  std::size_t n_qubits() const;
  // Every member as a Hermitian Pauli string (Majoranas hermitized through
  // Jordan-Wigner).
  std::vector<PauliString> hermitian_paulis() const;

 private:
  std::size_t n_;
  std::size_t locality_;
  Provenance provenance_;
  std::variant<std::vector<PauliString>, std::vector<MajoranaMonomial>> members_;
};

bool pauli_anticommutes(const PauliString& p, const PauliString& q);
bool majorana_anticommutes(const MajoranaMonomial& s, const MajoranaMonomial& t);
PauliString multiply_paulis(const PauliString& p, const PauliString& q);

// mode is 1-based.
PauliString jordan_wigner_majorana(int mode, std::size_t n_modes);
// Product gamma_{j1}...gamma_{jq}, times i^{q/2} when hermitize (q must be even).
PauliString to_pauli(const MajoranaMonomial& monomial, bool hermitize);

ComplexMatrix materialize(const PauliString& p);
ComplexMatrix materialize(const MajoranaMonomial& monomial, bool hermitize);

OperatorSet enumerate_set(OperatorKind kind, std::size_t n, std::size_t locality);

// A Pauli string specialised to dense state vectors of at most kHardDimCap
// amplitudes: A|b> = coeff * (-1)^{popcount(z & b)} |b ^ x>.
struct CompiledPauli {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  Complex coeff{1.0, 0.0};
  std::size_t dim = 1;

  explicit CompiledPauli(const PauliString& p);

  void apply(const ComplexVector& in, ComplexVector& out) const;
  ComplexVector apply(const ComplexVector& in) const;
  // <psi|A|psi>; real for Hermitian A.
  Complex expectation(const ComplexVector& psi) const;
  // m += weight * A
  void add_to(ComplexMatrix& m, Complex weight) const;
};

std::vector<CompiledPauli> compile(std::span<const PauliString> ops);

}  // namespace fermitheta
