#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "polydrive/magnus.hpp"
#include "polydrive/optimizer.hpp"
#include "polydrive/simulator.hpp"
#include "polydrive/types.hpp"

using namespace polydrive;

namespace {

UnitaryTrajectory synthetic_trajectory(const DrivingConfig& config, int n_periods,
                                       int samples_per_period,
                                       const std::function<Matrix3c(double)>& u_of_t) {
  UnitaryTrajectory trajectory;
  trajectory.samples_per_period = samples_per_period;
  trajectory.pulse = Pulse::zero(config.n_harmonics());
  for (int k = 0; k <= n_periods * samples_per_period; ++k) {
    const double t_over_period = static_cast<double>(k) / samples_per_period;
    trajectory.times.push_back(t_over_period);
    trajectory.unitaries.push_back(u_of_t(t_over_period * kPeriod));
  }
  return trajectory;
}

}  // namespace

TEST_CASE("hamiltonian structure") {
  const DrivingConfig config(10, 4, 0.05);

  SUBCASE("zero pulse gives the zero matrix") {
    CHECK(hamiltonian_at(Pulse::zero(10), config, 0.73).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("monochromatic value at t = 0") {
    const Pulse mc = monochromatic_pulse(config);
    const Matrix3c h = hamiltonian_at(mc, config, 0.0);
    // f(0) = f_N and the counter-rotating factor equals 2 at t = 0
    CHECK(h(0, 2).real() == doctest::Approx(2.0 * mc.component(10)).epsilon(1e-15));
    CHECK(h(1, 2).real() == doctest::Approx(2.0 * mc.component(10)).epsilon(1e-15));
    CHECK(h(0, 0) == std::complex<double>(0.0, 0.0));
    CHECK(h(0, 1) == std::complex<double>(0.0, 0.0));
  }

  SUBCASE("Hermitian and T-periodic") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> amp(-0.3, 0.3);
    std::uniform_real_distribution<double> time(0.0, kPeriod);
    Pulse pulse = Pulse::zero(10);
    for (double& f : pulse.amplitudes) f = amp(rng);
    for (int trial = 0; trial < 100; ++trial) {
      const double t = time(rng);
      const Matrix3c h = hamiltonian_at(pulse, config, t);
      CHECK((h - h.adjoint().eval()).cwiseAbs().maxCoeff() == 0.0);
      const Matrix3c shifted = hamiltonian_at(pulse, config, t + kPeriod);
      CHECK((h - shifted).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("envelope sums the components at t = 0") {
    Pulse pulse = Pulse::zero(3);
    pulse.amplitudes = {0.1, -0.2, 0.3};
    CHECK(pulse_envelope(pulse, 0.0).real() == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(pulse_envelope(pulse, 0.0).imag() == doctest::Approx(0.0));
  }
}

TEST_CASE("target propagator") {
  const DrivingConfig config(10, 4, 0.05);

  CHECK((target_propagator(config, 0.0) - Matrix3c::Identity()).cwiseAbs().maxCoeff() == 0.0);

  const double t = 7.3;
  const Matrix3c u = target_propagator(config, t);
  CHECK(u(1, 0).real() == doctest::Approx(0.0));
  CHECK(u(1, 0).imag() == doctest::Approx(std::sin(0.05 * t)).epsilon(1e-15));
  CHECK(unitarity_deviation(u) < 1e-15);

  // full transfer at t = pi/(2 Omega_tg)
  const Matrix3c half = target_propagator(config, kPi / (2.0 * 0.05));
  CHECK(std::norm(half(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));

  // the realizable target only differs by diagonal phases
  const Matrix3c shifted = effective_target_propagator(config, t);
  CHECK(std::norm(shifted(1, 0)) == doctest::Approx(std::norm(u(1, 0))).epsilon(1e-13));
  CHECK(std::norm(shifted(0, 0)) == doctest::Approx(std::norm(u(0, 0))).epsilon(1e-13));
  CHECK(unitarity_deviation(shifted) < 1e-15);
}

TEST_CASE("propagate validates its inputs") {
  const DrivingConfig config(4, 4, 0.05);
  const Pulse pulse = monochromatic_pulse(config);
  CHECK_THROWS_AS(propagate(pulse, config, 0, 256), std::invalid_argument);
  CHECK_THROWS_AS(propagate(pulse, config, 1, 32), std::invalid_argument);
  CHECK_THROWS_AS(propagate(pulse, config, 1, 255), std::invalid_argument);
  IntegratorOptions coarse;
  coarse.steps_per_fast_cycle = 39;
  CHECK_THROWS_AS(propagate(pulse, config, 1, 256, coarse), std::invalid_argument);

  IntegratorOptions impossible;
  impossible.drift_tolerance = 1e-18;
  try {
    propagate(pulse, config, 1, 256, impossible);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.t_over_period() > 0.0);
    CHECK(e.t_over_period() <= 1.0);
  }
}

TEST_CASE("zero drive stays at the identity") {
  const DrivingConfig config(10, 4, 0.05);
  const UnitaryTrajectory trajectory = propagate(Pulse::zero(10), config, 1, 64);
  CHECK(trajectory.unitarity_drift < 1e-14);
  for (const Matrix3c& u : trajectory.unitaries)
    CHECK((u - Matrix3c::Identity()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((trajectory.unitaries.front() - Matrix3c::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("one-period propagator generates the whole stroboscopic evolution") {
  const DrivingConfig config(10, 4, 0.05);
  const OptimizationResult r = solve_third_order(config);

  const UnitaryTrajectory two = propagate(r.pulse, config, 2, 64);
  const Matrix3c u_period = two.unitaries[64];
  CHECK((two.unitaries[128] - u_period * u_period).cwiseAbs().maxCoeff() < 1e-8);

  // Floquet property over a long horizon
  const UnitaryTrajectory fifty = propagate(r.pulse, config, 50, 64);
  CHECK(fifty.unitarity_drift <= 1e-9);
  Matrix3c power = Matrix3c::Identity();
  double worst = 0.0;
  for (int n = 1; n <= 50; ++n) {
    power = fifty.unitaries[64] * power;
    worst = std::max(
        worst, (fifty.unitaries[static_cast<std::size_t>(n) * 64] - power).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("monochromatic drive produces the Raman Rabi flop") {
  // pi/(2 Omega_tg) = 5 T at Omega_tg = 0.05: population transfer completes
  const DrivingConfig config(10, 4, 0.05);
  const UnitaryTrajectory trajectory = propagate(monochromatic_pulse(config), config, 5, 128);
  const FidelityReport report = fidelity_windows(trajectory, config);
  CHECK(report.p2.back() > 0.95);
  for (double p : report.p2) {
    CHECK(p >= 0.0);
    CHECK(p <= 1.0 + 1e-9);
  }
}

TEST_CASE("window fidelities") {
  const DrivingConfig config(10, 4, 0.05);

  SUBCASE("trajectory equal to the target has zero deviation") {
    const auto trajectory = synthetic_trajectory(
        config, 2, 128, [&](double t) { return effective_target_propagator(config, t); });
    const FidelityReport report = fidelity_windows(trajectory, config);
    REQUIRE(report.window_fidelities.size() == 2);
    CHECK(std::abs(report.window_fidelities[0]) < 1e-13);
    CHECK(std::abs(report.window_fidelities[1]) < 1e-13);
  }

  SUBCASE("frozen evolution against a slow target, closed form") {
    // U == 1: deviation 4(1 - cos(2 Omega t)), so F_1 = 4(1 - sinc(2 Omega T))
    const DrivingConfig slow(3, 4, 1e-3);
    const auto trajectory =
        synthetic_trajectory(slow, 1, 256, [&](double) { return Matrix3c::Identity(); });
    const FidelityReport report = fidelity_windows(trajectory, slow);
    const double x = 2.0 * 1e-3 * kPeriod;
    const double exact = 4.0 * (1.0 - std::sin(x) / x);
    CHECK(report.window_fidelities[0] == doctest::Approx(exact).epsilon(1e-10));
    // leading order (2/3) x^2
    CHECK(report.window_fidelities[0] ==
          doctest::Approx(2.0 / 3.0 * x * x).epsilon(1e-4));
  }

  SUBCASE("grids below 64 samples per period are rejected") {
    const auto trajectory =
        synthetic_trajectory(config, 1, 32, [&](double) { return Matrix3c::Identity(); });
    CHECK_THROWS_AS(fidelity_windows(trajectory, config), std::invalid_argument);
  }

  SUBCASE("leading-order prediction matches the measured first window") {
    const OptimizationResult r = solve_third_order(config);
    const UnitaryTrajectory trajectory = propagate(r.pulse, config, 1, 256);
    const FidelityReport report = fidelity_windows(trajectory, config);
    CHECK(report.predicted_f2 ==
          doctest::Approx(constraints(r.pulse, config, 3).predicted_f2).epsilon(1e-14));
    CHECK(std::abs(report.window_fidelities[0] - report.predicted_f2) / report.predicted_f2 <
          0.25);
    CHECK(report.max_p3 < 0.01);
  }
}

TEST_CASE("integration accuracy budget") {
  const DrivingConfig config(10, 4, 0.05);
  const OptimizationResult r = solve_third_order(config);

  // halving the step leaves the first window fidelity unchanged at 1e-8
  const UnitaryTrajectory coarse = propagate(r.pulse, config, 1, 256);
  IntegratorOptions halved;
  halved.steps_per_fast_cycle = 2 * IntegratorOptions{}.steps_per_fast_cycle;
  const UnitaryTrajectory fine = propagate(r.pulse, config, 1, 256, halved);
  const double f_coarse = fidelity_windows(coarse, config).window_fidelities[0];
  const double f_fine = fidelity_windows(fine, config).window_fidelities[0];
  CHECK(std::abs(f_coarse - f_fine) < 1e-8);
}

TEST_CASE("optimized drive tracks the target populations over long horizons") {
  const DrivingConfig config(10, 4, 0.05);
  const UnitaryTrajectory mc = propagate(monochromatic_pulse(config), config, 50, 128);
  const UnitaryTrajectory pc = propagate(solve_third_order(config).pulse, config, 50, 128);
  const FidelityReport mc_report = fidelity_windows(mc, config);
  const FidelityReport pc_report = fidelity_windows(pc, config);

  double mc_dev = 0.0, pc_dev = 0.0;
  for (std::size_t k = 0; k < mc.times.size(); ++k) {
    const double target = std::pow(std::sin(0.05 * mc.times[k] * kPeriod), 2);
    mc_dev = std::max(mc_dev, std::abs(mc_report.p2[k] - target));
    pc_dev = std::max(pc_dev, std::abs(pc_report.p2[k] - target));
  }
  CHECK(pc_dev < mc_dev);
}

TEST_CASE("fluctuation operator") {
  const DrivingConfig config(10, 4, 0.05);
  const OptimizationResult r = solve_third_order(config);
  const UnitaryTrajectory trajectory = propagate(r.pulse, config, 1, 256);
  const Matrix3c h_eff = effective_hamiltonian(r.pulse, config);

  CHECK((fluctuation_operator(trajectory, config, h_eff, 0) - Matrix3c::Identity())
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  CHECK((fluctuation_operator(trajectory, config, h_eff, 256) - Matrix3c::Identity())
            .cwiseAbs()
            .maxCoeff() < 1e-9);
  CHECK_THROWS_AS(fluctuation_operator(trajectory, config, h_eff, 257), std::out_of_range);

  // fluctuation amplitude is set by the predicted functional, sqrt(F^(2))
  const auto max_deviation = [&](const DrivingConfig& cfg, const Pulse& pulse) {
    const UnitaryTrajectory traj = propagate(pulse, cfg, 1, 256);
    const Matrix3c h = effective_hamiltonian(pulse, cfg);
    double dev = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k)
      dev = std::max(dev, (fluctuation_operator(traj, cfg, h, k) - Matrix3c::Identity())
                              .cwiseAbs()
                              .maxCoeff());
    return dev;
  };

  const double dev = max_deviation(config, r.pulse);
  CHECK(dev < std::sqrt(constraints(r.pulse, config, 3).predicted_f2));

  const DrivingConfig half(10, 4, 0.025);
  const double dev_half = max_deviation(half, solve_third_order(half).pulse);
  CHECK(dev_half < dev);
}
