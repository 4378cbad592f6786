#include "polydrive/magnus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polydrive {

double harmonic_weight(int n, int p, const DrivingConfig& config) {
  if (n < 1 || n > config.n_harmonics())
    throw std::domain_error("harmonic_weight: n must lie in 1..N");
  if (p < 1)
    throw std::domain_error("harmonic_weight: p must be >= 1");
  const double shifted = static_cast<double>(n) + config.detuning() * config.n0();
  return 1.0 / (std::pow(static_cast<double>(n), -p) + std::pow(shifted, -p));
}

double quadratic_moment(const Pulse& pulse, const DrivingConfig& config, int p) {
  detail::require_pulse_match(pulse, config);
  double sum = 0.0;
  for (int n = 1; n <= config.n_harmonics(); ++n) {
    const double f = pulse.component(n);
    sum += f * f / harmonic_weight(n, p, config);
  }
  return sum;
}

double quartic_moment(const Pulse& pulse, const DrivingConfig& config, int p) {
  detail::require_pulse_match(pulse, config);
  double sum = 0.0;
  for (int n = 1; n <= config.n_harmonics(); ++n) {
    const double f = pulse.component(n);
    sum += f * f * f * f / harmonic_weight(n, p, config);
  }
  return sum;
}

double ConstraintReport::max_active() const {
  return order == 2 ? std::max(std::abs(c1), std::abs(c2))
                    : std::max(std::abs(c2), std::abs(c3));
}

ConstraintReport constraints(const Pulse& pulse, const DrivingConfig& config, int order) {
  if (order != 2 && order != 3)
    throw std::invalid_argument("constraints: order must be 2 or 3");
  detail::require_pulse_match(pulse, config);

  const double a1 = quadratic_moment(pulse, config, 1);
  const double a2 = quadratic_moment(pulse, config, 2);
  const double b3 = quartic_moment(pulse, config, 3);

  double balance = 0.0;
  for (int n = 1; n <= config.n_harmonics(); ++n)
    balance += pulse.component(n) / harmonic_weight(n, 1, config);

  ConstraintReport report;
  report.c1 = a1 - config.omega_tg();
  report.c2 = balance;
  report.c3 = a1 + 2.0 * b3 - 4.0 * a1 * a2 - config.omega_tg();
  report.predicted_f2 = 4.0 * a2;
  report.order = order;
  return report;
}

Matrix3c effective_hamiltonian(const Pulse& pulse, const DrivingConfig& config,
                               const IntegratorOptions& options) {
  const UnitaryTrajectory trajectory = propagate(pulse, config, 1, 64, options);
  return generator_from_unitary(trajectory.unitaries.back(), config.period());
}

}  // namespace polydrive
