#include "polydrive/linalg.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "polydrive/types.hpp"

namespace polydrive {

Matrix3c generator_from_unitary(const Matrix3c& u, double t, double branch_margin) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::invalid_argument("generator_from_unitary: t must be positive and finite");

  // A unitary matrix is normal, so its Schur form is diagonal up to roundoff;
  // the Schur basis stays orthonormal, which keeps the result Hermitian.
  Eigen::ComplexSchur<Matrix3c> schur(u);
  if (schur.info() != Eigen::Success)
    throw std::runtime_error("generator_from_unitary: Schur decomposition failed");

  const Matrix3c& tri = schur.matrixT();
  const Matrix3c& q = schur.matrixU();

  Eigen::Vector3cd log_eigs;
  for (int k = 0; k < 3; ++k) {
    const std::complex<double> lambda = tri(k, k);
    const double phase = std::arg(lambda);
    if (std::abs(phase) > kPi - branch_margin)
      throw std::runtime_error(
          "generator_from_unitary: eigenphase within branch margin of +-pi, "
          "principal logarithm is ambiguous");
    log_eigs(k) = std::complex<double>(std::log(std::abs(lambda)), phase);
  }

  const std::complex<double> scale(0.0, 1.0 / t);
  return scale * (q * log_eigs.asDiagonal() * q.adjoint());
}

Matrix3c unitary_from_generator(const Matrix3c& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("unitary_from_generator: eigendecomposition failed");

  Eigen::Vector3cd phases;
  for (int k = 0; k < 3; ++k)
    phases(k) = std::exp(std::complex<double>(0.0, -es.eigenvalues()(k) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double unitarity_deviation(const Matrix3c& u) {
  return (u.adjoint() * u - Matrix3c::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace polydrive
