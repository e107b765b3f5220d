#pragma once

#include <complex>

#include "fermitheta/algebra.hpp"

namespace fermitheta {

inline constexpr double kHermitianTol = 1e-9;

// Complex Hermitian matrix. Construction checks ||M - M^dagger||_max and then
// stores the exact Hermitian part.
class DenseHermitian {
 public:
  explicit DenseHermitian(ComplexMatrix m, double tol = kHermitianTol);
  explicit DenseHermitian(const RealMatrix& m, double tol = kHermitianTol);

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

struct Spectrum {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors;  // columns
};

Spectrum eigh(const DenseHermitian& h);
RealVector eigvalsh(const DenseHermitian& h);

// exp(s H); s must be real or purely imaginary.
ComplexMatrix expm_hermitian(const DenseHermitian& h, Complex s);
ComplexMatrix expm_hermitian(const Spectrum& spectrum, Complex s);

}  // namespace fermitheta
