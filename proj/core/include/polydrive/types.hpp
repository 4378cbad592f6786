#pragma once

#include <cstddef>
#include <vector>

// polydrive works in natural driving units throughout: the fundamental
// frequency is omega = 1, so every frequency-like quantity is expressed in
// units of omega and every time in units of the driving period T = 2*pi/omega
// unless a function documents otherwise.

namespace polydrive {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kPeriod = 2.0 * kPi;  // T = 2*pi / omega with omega = 1

/// Problem statement for the driven three-level Lambda system: an N-component
/// Fourier drive with fundamental frequency omega, detuning Delta = N*omega,
/// counter-rotating factor exp(-i*n0*Delta*t), and a target Raman rate
/// Omega_tg between the two ground states.
class DrivingConfig {
 public:
  /// Throws std::invalid_argument when n_harmonics < 1, n0 < 1, omega_tg is
  /// not positive/finite, or the expansion parameter epsilon >= 0.5. For
  /// epsilon > 0.2 the configuration is accepted but a warning is printed to
  /// stderr, since the effective description loses accuracy there.
  DrivingConfig(int n_harmonics, int n0, double omega_tg);

  int n_harmonics() const { return n_harmonics_; }
  int n0() const { return n0_; }

  /// Target Raman rate in units of omega.
  double omega_tg() const { return omega_tg_; }

  double omega() const { return 1.0; }
  double period() const { return kPeriod; }

  /// Detuning Delta = N*omega, in units of omega.
  double detuning() const { return static_cast<double>(n_harmonics_); }

  /// Expansion parameter epsilon = Omega_tg / omega.
  double epsilon() const { return omega_tg_; }
  bool accuracy_warning() const { return omega_tg_ > 0.2; }

 private:
  int n_harmonics_;
  int n0_;
  double omega_tg_;
};

/// Real Fourier amplitudes f_1..f_N of the driving envelope, in units of
/// omega. amplitudes[k] holds f_{k+1}; component(n) uses the 1-based index n.
struct Pulse {
  std::vector<double> amplitudes;

  Pulse() = default;
  explicit Pulse(std::vector<double> a) : amplitudes(std::move(a)) {}

  static Pulse zero(int n_harmonics);

  int size() const { return static_cast<int>(amplitudes.size()); }
  double component(int n) const { return amplitudes[static_cast<std::size_t>(n - 1)]; }
};

/// Output of the constrained pulse optimization.
struct OptimizationResult {
  Pulse pulse;
  double lambda1 = 0.0;        // Lagrange multiplier of the rate constraint, dimensionless
  double lambda2 = 0.0;        // Lagrange multiplier of the balance constraint, units of omega
  int order = 2;               // order of the active constraint set, 2 or 3
  double residual_norm = 0.0;  // max-norm over all constraint and stationarity residuals
  int iterations = 0;          // Newton steps taken; 0 for the analytic second-order path
};

/// Single-frequency baseline drive: only f_N is nonzero, placed at the
/// detuning Delta = N*omega with amplitude sqrt(Omega_tg*Delta*(1+n0)/(2+n0)).
/// Satisfies the first-order rate constraint exactly.
Pulse monochromatic_pulse(const DrivingConfig& config);

namespace detail {
/// Throws std::invalid_argument unless the pulse has the config's component
/// count and all entries are finite.
void require_pulse_match(const Pulse& pulse, const DrivingConfig& config);
}  // namespace detail

}  // namespace polydrive
