#include "fermitheta/densekernel.hpp"

#include <Eigen/Eigenvalues>

#include "fermitheta/errors.hpp"

namespace fermitheta {

DenseHermitian::DenseHermitian(ComplexMatrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) throw InputError("Hermitian matrix must be square and nonempty");
  const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol) throw InputError("matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");
  m_ = 0.5 * (m_ + m_.adjoint()).eval();
}

DenseHermitian::DenseHermitian(const RealMatrix& m, double tol) : DenseHermitian(ComplexMatrix(m.cast<Complex>()), tol) {}

// Eigen's self-adjoint solver: Householder tridiagonalization followed by
// implicit symmetric QR steps with Wilkinson shifts.
Spectrum eigh(const DenseHermitian& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw StructuralError("Hermitian eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector eigvalsh(const DenseHermitian& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw StructuralError("Hermitian eigensolver did not converge");
  return solver.eigenvalues();
}

ComplexMatrix expm_hermitian(const Spectrum& spectrum, Complex s) {
  if (s.real() != 0.0 && s.imag() != 0.0) throw InputError("exponent scale must be real or purely imaginary");
  const auto& u = spectrum.eigenvectors;
  ComplexVector d(spectrum.eigenvalues.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = std::exp(s * spectrum.eigenvalues[i]);
  return u * d.asDiagonal() * u.adjoint();
}

ComplexMatrix expm_hermitian(const DenseHermitian& h, Complex s) { return expm_hermitian(eigh(h), s); }

}  // namespace fermitheta
