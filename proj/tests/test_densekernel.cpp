#include "doctest.h"
#include "oracle.hpp"

#include <cmath>
#include <numbers>

#include "fermitheta/densekernel.hpp"
#include "fermitheta/errors.hpp"
#include "fermitheta/random.hpp"

using namespace fermitheta;

namespace {

DenseHermitian random_hermitian(int dim, unsigned seed) {
  std::srand(seed);
  ComplexMatrix a = ComplexMatrix::Random(dim, dim);
  return DenseHermitian(ComplexMatrix(a + a.adjoint()));
}

}  // namespace

TEST_CASE("eigh small cases") {
  RealMatrix d = RealMatrix::Zero(3, 3);
  d.diagonal() << 3, 1, 2;
  const auto s = eigh(DenseHermitian(d));
  CHECK(s.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(s.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(s.eigenvalues[2] == doctest::Approx(3.0));

  const auto x = eigvalsh(DenseHermitian(oracle::pauli("X")));
  CHECK(x[0] == doctest::Approx(-1.0));
  CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("eigh residuals on a random 64-dimensional matrix") {
  const auto h = random_hermitian(64, 1);
  const auto s = eigh(h);
  const ComplexMatrix rec = s.eigenvectors * s.eigenvalues.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();
  CHECK((rec - h.matrix()).norm() <= 1e-9 * std::max(1.0, h.matrix().norm()));
  CHECK((s.eigenvectors.adjoint() * s.eigenvectors - ComplexMatrix::Identity(64, 64)).cwiseAbs().maxCoeff() <= 1e-10);
  for (Eigen::Index i = 1; i < 64; ++i) CHECK(s.eigenvalues[i] >= s.eigenvalues[i - 1]);
  const auto again = eigvalsh(h);
  CHECK((again - s.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("non-Hermitian input is rejected") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(DenseHermitian{m}, InputError);
  ComplexMatrix rect = ComplexMatrix::Zero(2, 3);
  CHECK_THROWS_AS(DenseHermitian{rect}, InputError);
}

TEST_CASE("matrix exponential") {
  const auto h = random_hermitian(16, 2);
  CHECK((expm_hermitian(h, 0.0) - ComplexMatrix::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-12);

  const auto rot = expm_hermitian(DenseHermitian(oracle::pauli("Z")), Complex(0.0, std::numbers::pi / 2));
  CHECK(std::abs(rot(0, 0) - Complex(0, 1)) < 1e-12);
  CHECK(std::abs(rot(1, 1) - Complex(0, -1)) < 1e-12);
  CHECK(std::abs(rot(0, 1)) < 1e-12);

  const double beta = 0.7;
  const auto lam = eigvalsh(h);
  double z = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) z += std::exp(-beta * lam[i]);
  CHECK(std::abs(expm_hermitian(h, -beta).trace().real() - z) <= 1e-10 * z);

  const auto u = expm_hermitian(h, Complex(0.0, 1.3));
  CHECK((u * u.adjoint() - ComplexMatrix::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-9);

  const ComplexMatrix ab = expm_hermitian(h, 0.3) * expm_hermitian(h, -0.5);
  CHECK((ab - expm_hermitian(h, -0.2)).cwiseAbs().maxCoeff() < 1e-8);

  CHECK_THROWS_AS(expm_hermitian(h, Complex(1.0, 1.0)), InputError);
}

TEST_CASE("gaussian streams") {
  CHECK(gaussian_stream(1, 0, 0).empty());
  const auto a = gaussian_stream(42, 3, 1000);
  const auto b = gaussian_stream(42, 3, 1000);
  CHECK(a == b);
  const auto c = gaussian_stream(42, 4, 1000);
  CHECK(a != c);

  const auto big = gaussian_stream(9, 0, 100000);
  double mean = 0.0;
  for (double v : big) mean += v;
  mean /= static_cast<double>(big.size());
  double var = 0.0;
  for (double v : big) var += (v - mean) * (v - mean);
  var /= static_cast<double>(big.size() - 1);
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.02);

  RandomStream s(5, 6);
  for (int i = 0; i < 1000; ++i) {
    const double u = s.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}
