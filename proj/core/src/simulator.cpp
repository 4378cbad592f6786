#include "polydrive/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "polydrive/magnus.hpp"

namespace polydrive {

namespace {

using Complex = std::complex<double>;

// Off-diagonal coupling g(t) = f(t) * (1 + exp(-i*n0*Delta*t)).
Complex coupling_at(const Pulse& pulse, double counter_freq, double t) {
  return pulse_envelope(pulse, t) * (1.0 + std::polar(1.0, -counter_freq * t));
}

Matrix3c build_hamiltonian(const Pulse& pulse, double counter_freq, double t) {
  const Complex g = coupling_at(pulse, counter_freq, t);
  Matrix3c h = Matrix3c::Zero();
  h(0, 2) = g;
  h(1, 2) = g;
  h(2, 0) = std::conj(g);
  h(2, 1) = std::conj(g);
  return h;
}

}  // namespace

std::complex<double> pulse_envelope(const Pulse& pulse, double t) {
  // Horner sum of f_n z^n with z = exp(-i*t).
  const Complex z = std::polar(1.0, -t);
  Complex acc(0.0, 0.0);
  for (int n = pulse.size(); n >= 1; --n)
    acc = z * (pulse.component(n) + acc);
  return acc;
}

Matrix3c hamiltonian_at(const Pulse& pulse, const DrivingConfig& config, double t) {
  detail::require_pulse_match(pulse, config);
  if (!std::isfinite(t))
    throw std::invalid_argument("hamiltonian_at: t must be finite");
  return build_hamiltonian(pulse, config.n0() * config.detuning(), t);
}

UnitaryTrajectory propagate(const Pulse& pulse, const DrivingConfig& config,
                            int n_periods, int samples_per_period,
                            const IntegratorOptions& options) {
  detail::require_pulse_match(pulse, config);
  if (n_periods < 1)
    throw std::invalid_argument("propagate: n_periods must be >= 1");
  if (samples_per_period < 64)
    throw std::invalid_argument("propagate: samples_per_period must be >= 64");
  if (samples_per_period % 2 != 0)
    throw std::invalid_argument("propagate: samples_per_period must be even");
  if (options.steps_per_fast_cycle < 40)
    throw std::invalid_argument("propagate: steps_per_fast_cycle must be >= 40");
  if (!(options.drift_tolerance > 0.0))
    throw std::invalid_argument("propagate: drift_tolerance must be positive");

  const double counter_freq = config.n0() * config.detuning();
  const double fast_harmonic = config.detuning() * (1.0 + config.n0());  // N*(1+n0)
  const double sample_dt = kPeriod / samples_per_period;
  const double step_cap = kPeriod / (fast_harmonic * options.steps_per_fast_cycle);
  const int substeps = std::max(1, static_cast<int>(std::ceil(sample_dt / step_cap)));
  const double h = sample_dt / substeps;

  const int n_samples = n_periods * samples_per_period;

  UnitaryTrajectory trajectory;
  trajectory.samples_per_period = samples_per_period;
  trajectory.pulse = pulse;
  trajectory.times.reserve(n_samples + 1);
  trajectory.unitaries.reserve(n_samples + 1);

  Matrix3c u = Matrix3c::Identity();
  trajectory.times.push_back(0.0);
  trajectory.unitaries.push_back(u);

  const Complex minus_i(0.0, -1.0);
  const auto derivative = [&](double t, const Matrix3c& state) -> Matrix3c {
    return minus_i * (build_hamiltonian(pulse, counter_freq, t) * state);
  };

  double drift = 0.0;
  for (int s = 1; s <= n_samples; ++s) {
    const double t_base = sample_dt * (s - 1);
    for (int j = 0; j < substeps; ++j) {
      const double t = t_base + j * h;
      const Matrix3c k1 = derivative(t, u);
      const Matrix3c k2 = derivative(t + 0.5 * h, u + (0.5 * h) * k1);
      const Matrix3c k3 = derivative(t + 0.5 * h, u + (0.5 * h) * k2);
      const Matrix3c k4 = derivative(t + h, u + h * k3);
      u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    drift = std::max(drift, unitarity_deviation(u));
    const double t_over_period = static_cast<double>(s) / samples_per_period;
    if (drift > options.drift_tolerance) {
      std::ostringstream msg;
      msg << "propagate: unitarity drift " << drift << " exceeds tolerance "
          << options.drift_tolerance << " at t = " << t_over_period << " periods";
      throw IntegrationError(msg.str(), t_over_period);
    }
    trajectory.times.push_back(t_over_period);
    trajectory.unitaries.push_back(u);
  }

  trajectory.unitarity_drift = drift;
  return trajectory;
}

Matrix3c target_propagator(const DrivingConfig& config, double t) {
  if (!std::isfinite(t))
    throw std::invalid_argument("target_propagator: t must be finite");
  const double angle = config.omega_tg() * t;
  const double c = std::cos(angle);
  const Complex is(0.0, std::sin(angle));
  Matrix3c u = Matrix3c::Zero();
  u(0, 0) = c;
  u(1, 1) = c;
  u(0, 1) = is;
  u(1, 0) = is;
  u(2, 2) = 1.0;
  return u;
}

Matrix3c effective_target_propagator(const DrivingConfig& config, double t) {
  if (!std::isfinite(t))
    throw std::invalid_argument("effective_target_propagator: t must be finite");
  const double angle = config.omega_tg() * t;
  // exp(+i*Omega*t) on the ground block absorbs the uniform ground shift.
  const Complex phase = std::polar(1.0, angle);
  const Complex c = phase * std::cos(angle);
  const Complex is = phase * Complex(0.0, std::sin(angle));
  Matrix3c u = Matrix3c::Zero();
  u(0, 0) = c;
  u(1, 1) = c;
  u(0, 1) = is;
  u(1, 0) = is;
  u(2, 2) = std::polar(1.0, -2.0 * angle);
  return u;
}

FidelityReport fidelity_windows(const UnitaryTrajectory& trajectory,
                                const DrivingConfig& config) {
  const int spp = trajectory.samples_per_period;
  if (spp < 64)
    throw std::invalid_argument("fidelity_windows: grid too coarse, need >= 64 samples per period");
  if (spp % 2 != 0)
    throw std::invalid_argument("fidelity_windows: samples_per_period must be even");
  const std::size_t n_points = trajectory.times.size();
  if (n_points != trajectory.unitaries.size() || n_points < static_cast<std::size_t>(spp) + 1 ||
      (n_points - 1) % static_cast<std::size_t>(spp) != 0)
    throw std::invalid_argument("fidelity_windows: trajectory grid does not cover whole periods");

  const int n_periods = static_cast<int>((n_points - 1) / spp);

  FidelityReport report;
  report.predicted_f2 = 4.0 * quadratic_moment(trajectory.pulse, config, 2);
  report.p2.reserve(n_points);
  report.p3.reserve(n_points);

  // Pointwise deviation ||U - U_tg||^2 = 6 - 2 Re Tr(U_tg^dag U).
  std::vector<double> deviation(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double t = trajectory.times[k] * kPeriod;
    const Matrix3c& u = trajectory.unitaries[k];
    deviation[k] =
        6.0 - 2.0 * (effective_target_propagator(config, t).adjoint() * u).trace().real();
    report.p2.push_back(std::norm(u(1, 0)));
    report.p3.push_back(std::norm(u(2, 0)));
  }
  report.max_p3 = *std::max_element(report.p3.begin(), report.p3.end());

  report.window_fidelities.reserve(n_periods);
  for (int w = 0; w < n_periods; ++w) {
    const std::size_t base = static_cast<std::size_t>(w) * spp;
    double sum = deviation[base] + deviation[base + spp];
    for (int k = 1; k < spp; ++k)
      sum += (k % 2 == 1 ? 4.0 : 2.0) * deviation[base + k];
    // (1/T) * Simpson with step T/spp; roundoff can leave a tiny negative value.
    report.window_fidelities.push_back(std::max(sum / (3.0 * spp), 0.0));
  }
  return report;
}

Matrix3c fluctuation_operator(const UnitaryTrajectory& trajectory,
                              const DrivingConfig& config,
                              const Matrix3c& h_eff, std::size_t t_index) {
  if (t_index >= trajectory.times.size())
    throw std::out_of_range("fluctuation_operator: sample index out of range");
  const double t = trajectory.times[t_index] * config.period();
  // U~(t) = U(t) exp(+i H_eff t)
  return trajectory.unitaries[t_index] * unitary_from_generator(h_eff, -t);
}

}  // namespace polydrive
