#include "polydrive/types.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace polydrive {

DrivingConfig::DrivingConfig(int n_harmonics, int n0, double omega_tg)
    : n_harmonics_(n_harmonics), n0_(n0), omega_tg_(omega_tg) {
  if (n_harmonics < 1)
    throw std::invalid_argument("DrivingConfig: n_harmonics must be >= 1");
  if (n0 < 1)
    throw std::invalid_argument("DrivingConfig: n0 must be >= 1");
  if (!std::isfinite(omega_tg) || omega_tg <= 0.0)
    throw std::invalid_argument("DrivingConfig: omega_tg must be positive and finite");
  if (omega_tg >= 0.5)
    throw std::invalid_argument(
        "DrivingConfig: expansion parameter epsilon = omega_tg/omega must be < 0.5");
  if (accuracy_warning())
    std::cerr << "polydrive: warning: epsilon = " << omega_tg
              << " exceeds 0.2; the effective description degrades quickly there\n";
}

Pulse Pulse::zero(int n_harmonics) {
  return Pulse(std::vector<double>(static_cast<std::size_t>(n_harmonics), 0.0));
}

Pulse monochromatic_pulse(const DrivingConfig& config) {
  Pulse pulse = Pulse::zero(config.n_harmonics());
  const double n0 = static_cast<double>(config.n0());
  pulse.amplitudes.back() =
      std::sqrt(config.omega_tg() * config.detuning() * (1.0 + n0) / (2.0 + n0));
  return pulse;
}

namespace detail {

void require_pulse_match(const Pulse& pulse, const DrivingConfig& config) {
  if (pulse.size() != config.n_harmonics())
    throw std::invalid_argument("pulse has " + std::to_string(pulse.size()) +
                                " components, config expects " +
                                std::to_string(config.n_harmonics()));
  for (double f : pulse.amplitudes)
    if (!std::isfinite(f))
      throw std::invalid_argument("pulse contains a non-finite component");
}

}  // namespace detail

}  // namespace polydrive
