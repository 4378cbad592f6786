#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "polydrive/linalg.hpp"
#include "polydrive/types.hpp"

namespace polydrive {

/// Fixed-step integration controls. The RK4 step is tied to the fastest
/// Hamiltonian frequency N*(1+n0)*omega; steps_per_fast_cycle sets how many
/// steps resolve one cycle of it (at least 40). The default leaves the
/// one-period propagator error well below the 1e-9 unitarity budget.
struct IntegratorOptions {
  int steps_per_fast_cycle = 320;
  double drift_tolerance = 1e-9;  // max allowed ||U^dag U - 1|| along the trajectory
};

/// Raised when the propagator violates its accuracy budget.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t_over_period)
      : std::runtime_error(what), t_over_period_(t_over_period) {}

  /// Time of the violation, in units of T.
  double t_over_period() const { return t_over_period_; }

 private:
  double t_over_period_;
};

/// Sampled one-sided propagator history U(t) with U(0) = 1.
struct UnitaryTrajectory {
  std::vector<double> times;        // sample times in units of T, 0 .. n_periods
  std::vector<Matrix3c> unitaries;  // U at each sample
  double unitarity_drift = 0.0;     // max ||U^dag U - 1|| seen on the grid
  int samples_per_period = 0;
  Pulse pulse;                      // drive that generated the trajectory
};

/// Window fidelities and population traces extracted from a trajectory.
struct FidelityReport {
  double predicted_f2 = 0.0;             // leading-order fluctuation estimate 4*A_2
  std::vector<double> window_fidelities; // F_n, one entry per driving period
  std::vector<double> p2;                // |<2|U(t)|1>|^2 at each sample
  std::vector<double> p3;                // |<3|U(t)|1>|^2 at each sample
  double max_p3 = 0.0;
};

/// Driving envelope f(t) = sum_n f_n exp(-i*n*omega*t). t in natural units.
std::complex<double> pulse_envelope(const Pulse& pulse, double t);

/// Lambda-system Hamiltonian at time t (natural units): the two ground states
/// couple to the excited state with f(t)*(1 + exp(-i*n0*Delta*t)), Hermitian
/// and T-periodic by construction.
Matrix3c hamiltonian_at(const Pulse& pulse, const DrivingConfig& config, double t);

/// Integrates i dU/dt = H(t) U over n_periods with fixed-step RK4, sampling
/// samples_per_period points per period (even, at least 64). Throws
/// IntegrationError if the unitarity drift exceeds the options' budget.
UnitaryTrajectory propagate(const Pulse& pulse, const DrivingConfig& config,
                            int n_periods, int samples_per_period,
                            const IntegratorOptions& options = {});

/// Closed-form target propagator exp(-i*H_tg*t) with
/// H_tg = -Omega_tg(|1><2| + |2><1|); t in natural units.
Matrix3c target_propagator(const DrivingConfig& config, double t);

/// Target propagator including the displacement the drive necessarily
/// produces alongside the Raman coupling. The coupling algebra closes in the
/// {bright, excited} block, which ties the ground displacement to the
/// coupling exactly; matching the coupling to -Omega_tg therefore comes with
/// the traceless shift diag(-Omega_tg, -Omega_tg, +2*Omega_tg). The shift is
/// a pure phase on the ground manifold: populations and ground coherences
/// are those of target_propagator. Fidelities are measured against this
/// realizable target.
Matrix3c effective_target_propagator(const DrivingConfig& config, double t);

/// Per-period fidelity windows F_n = (1/T) int ||U - U_tg||^2 dt via the trace
/// identity ||U - U_tg||^2 = 6 - 2 Re Tr(U_tg^dag U) and composite Simpson
/// quadrature on the sample grid, plus population traces. U_tg is the
/// realizable target of effective_target_propagator.
FidelityReport fidelity_windows(const UnitaryTrajectory& trajectory,
                                const DrivingConfig& config);

/// Fluctuation operator U~(t) = U(t) exp(+i*H_eff*t) at a sample index, given
/// the numeric effective Hamiltonian (see magnus.hpp). Diagnostic only;
/// U~(0) = 1 and U~ is T-periodic up to integrator tolerance.
Matrix3c fluctuation_operator(const UnitaryTrajectory& trajectory,
                              const DrivingConfig& config,
                              const Matrix3c& h_eff, std::size_t t_index);

}  // namespace polydrive
