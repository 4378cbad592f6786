#pragma once

#include <Eigen/Dense>

namespace polydrive {

using Matrix3c = Eigen::Matrix3cd;

/// Hermitian generator H of a unitary u = exp(-i*H*t), recovered through the
/// principal matrix logarithm (complex Schur form of u, eigenphases taken in
/// (-pi, pi]). Throws std::runtime_error if an eigenphase lies within
/// branch_margin of +-pi, where the principal branch is ambiguous.
Matrix3c generator_from_unitary(const Matrix3c& u, double t,
                                double branch_margin = 1e-3);

/// exp(-i*h*t) for Hermitian h, by eigendecomposition.
Matrix3c unitary_from_generator(const Matrix3c& h, double t);

/// Max-abs-entry deviation from unitarity, ||u^dag u - 1||.
double unitarity_deviation(const Matrix3c& u);

}  // namespace polydrive
