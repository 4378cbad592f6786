#pragma once

#include "polydrive/linalg.hpp"
#include "polydrive/simulator.hpp"
#include "polydrive/types.hpp"

namespace polydrive {

/// Combined co-/counter-rotating harmonic weight
/// n~(p) = 1 / (n^-p + (n + N*n0)^-p), strictly positive.
/// Throws std::domain_error for n outside 1..N or p < 1.
/// For n0 -> infinity this tends to the rotating-wave value n^p.
double harmonic_weight(int n, int p, const DrivingConfig& config);

/// Quadratic pulse moment A_p = sum_n f_n^2 / n~(p), f_n in units of omega.
double quadratic_moment(const Pulse& pulse, const DrivingConfig& config, int p);

/// Quartic pulse moment B_p = sum_n f_n^4 / n~(p).
double quartic_moment(const Pulse& pulse, const DrivingConfig& config, int p);

/// Residuals of the effective-Hamiltonian constraint set. All entries are
/// computed regardless of the requested order so diagnostics can show how
/// badly, say, a second-order solution violates the third-order constraint.
struct ConstraintReport {
  double c1 = 0.0;           // first-order rate residual, A_1 - Omega_tg/omega
  double c2 = 0.0;           // balance residual, sum_n f_n / n~(1)
  double c3 = 0.0;           // third-order rate residual, A_1 + 2*B_3 - 4*A_1*A_2 - Omega_tg/omega
  double predicted_f2 = 0.0; // leading-order fluctuation F^(2) = 4*A_2
  int order = 2;             // active set: {c1, c2} at order 2, {c2, c3} at order 3

  double max_active() const;
};

ConstraintReport constraints(const Pulse& pulse, const DrivingConfig& config, int order);

/// Numeric effective Hamiltonian H_eff = (i/T) log U(T), with U(T) obtained by
/// exact one-period propagation and the principal matrix logarithm. Serves as
/// the independent oracle for the closed-form constraint set; Hermitian to
/// within integrator tolerance. Eigenphases near +-pi raise an error, which
/// cannot occur for epsilon << 1 since ||H_eff||*T << pi.
Matrix3c effective_hamiltonian(const Pulse& pulse, const DrivingConfig& config,
                               const IntegratorOptions& options = {});

}  // namespace polydrive
