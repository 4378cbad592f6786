#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "polydrive/optimizer.hpp"
#include "polydrive/robustness.hpp"
#include "polydrive/simulator.hpp"
#include "polydrive/types.hpp"

using namespace polydrive;

TEST_CASE("random stream") {
  RandomStream a = RandomStream::for_trial(7, 0);
  RandomStream b = RandomStream::for_trial(7, 0);
  RandomStream c = RandomStream::for_trial(7, 1);
  CHECK(a.next() == b.next());
  CHECK(a.next() != c.next());

  RandomStream u = RandomStream::for_trial(123, 5);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform(-0.25, 0.25);
    CHECK(x >= -0.25);
    CHECK(x < 0.25);
  }
}

TEST_CASE("perturbation support and mean") {
  const DrivingConfig config(10, 4, 0.05);
  const Pulse base = monochromatic_pulse(config);

  SUBCASE("zero half-width leaves the pulse untouched") {
    RandomStream stream = RandomStream::for_trial(1, 0);
    const Pulse same = perturb(base, 0.0, stream);
    CHECK(same.amplitudes == base.amplitudes);
  }

  SUBCASE("draws stay inside [f - delta, f + delta]") {
    const double delta = 0.003;
    RandomStream stream = RandomStream::for_trial(9, 2);
    for (int trial = 0; trial < 2000; ++trial) {
      const Pulse moved = perturb(base, delta, stream);
      for (int k = 0; k < 10; ++k) {
        CHECK(moved.amplitudes[k] >= base.amplitudes[k] - delta);
        CHECK(moved.amplitudes[k] <= base.amplitudes[k] + delta);
      }
    }
  }

  SUBCASE("empirical mean converges to the unperturbed component") {
    // uniform variance delta^2/3; allow three standard errors
    const double delta = 0.01;
    const int draws = 100000;
    RandomStream stream = RandomStream::for_trial(21, 0);
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) sum += perturb(base, delta, stream).amplitudes[9];
    const double bound = 3.0 * delta / std::sqrt(3.0 * draws);
    CHECK(std::abs(sum / draws - base.amplitudes[9]) < bound);
  }

  SUBCASE("negative half-width is rejected") {
    RandomStream stream = RandomStream::for_trial(0, 0);
    CHECK_THROWS_AS(perturb(base, -1e-3, stream), std::invalid_argument);
  }
}

TEST_CASE("uncertainty scale from the order-2/order-3 gap") {
  const DrivingConfig config(10, 4, 0.05);
  const double scale = delta_max(config);
  CHECK(scale == delta_max(config));  // deterministic
  CHECK(scale > 0.005);
  CHECK(scale < 0.02);

  // shrinks with the target rate
  double prev = scale;
  for (const double omega_tg : {0.025, 0.0125}) {
    const double d = delta_max(DrivingConfig(10, 4, omega_tg));
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("sweep with zero perturbation reproduces the plain run") {
  const DrivingConfig config(10, 4, 0.05);
  const OptimizationResult r = solve_third_order(config);

  RobustnessConfig rc;
  rc.delta = 0.0;
  rc.trials = 5;
  rc.n_periods = 2;
  rc.seed = 17;
  const RobustnessSummary summary = robustness_sweep(r.pulse, config, rc, 64);

  const FidelityReport plain =
      fidelity_windows(propagate(r.pulse, config, 2, 64), config);
  REQUIRE(summary.fn_mean.size() == 2);
  for (int p = 0; p < 2; ++p) {
    CHECK(summary.fn_mean[p] == plain.window_fidelities[p]);
    CHECK(summary.fn_stderr[p] == 0.0);
    for (int k = 0; k < 5; ++k) CHECK(summary.trial_fn[k][p] == plain.window_fidelities[p]);
  }
}

TEST_CASE("sweep is reproducible and seed-sensitive") {
  const DrivingConfig config(6, 4, 0.05);
  const OptimizationResult r = solve_second_order(config);

  RobustnessConfig rc;
  rc.delta = 0.002;
  rc.trials = 6;
  rc.n_periods = 2;
  rc.seed = 99;
  const RobustnessSummary a = robustness_sweep(r.pulse, config, rc, 64);
  const RobustnessSummary b = robustness_sweep(r.pulse, config, rc, 64);
  CHECK(a.fn_mean == b.fn_mean);
  CHECK(a.fn_stderr == b.fn_stderr);
  CHECK(a.trial_fn == b.trial_fn);

  rc.seed = 100;
  const RobustnessSummary c = robustness_sweep(r.pulse, config, rc, 64);
  CHECK(a.fn_mean != c.fn_mean);
}

TEST_CASE("trial substreams do not depend on execution order") {
  const DrivingConfig config(6, 4, 0.05);
  const Pulse pulse = solve_second_order(config).pulse;

  RobustnessConfig rc;
  rc.delta = 0.003;
  rc.trials = 4;
  rc.n_periods = 1;
  rc.seed = 42;
  const RobustnessSummary summary = robustness_sweep(pulse, config, rc, 64);

  // recompute every trial by hand, in reverse order
  for (int k = rc.trials - 1; k >= 0; --k) {
    RandomStream stream = RandomStream::for_trial(rc.seed, static_cast<std::uint64_t>(k));
    const Pulse moved = perturb(pulse, rc.delta, stream);
    const FidelityReport report =
        fidelity_windows(propagate(moved, config, 1, 64), config);
    CHECK(summary.trial_fn[k] == report.window_fidelities);
  }
}

TEST_CASE("averaged fidelity approaches the unperturbed one as delta shrinks") {
  const DrivingConfig config(10, 4, 0.05);
  const OptimizationResult r = solve_third_order(config);
  const double scale = delta_max(config);

  const FidelityReport plain =
      fidelity_windows(propagate(r.pulse, config, 2, 64), config);

  // common random numbers across the three half-widths: deviations scale
  // smoothly, at least linearly
  double prev = -1.0;
  for (const double divisor : {4.0, 8.0, 16.0}) {
    RobustnessConfig rc;
    rc.delta = scale / divisor;
    rc.trials = 10;
    rc.n_periods = 2;
    rc.seed = 5;
    const RobustnessSummary summary = robustness_sweep(r.pulse, config, rc, 64);
    double dev = 0.0;
    for (int p = 0; p < 2; ++p)
      dev = std::max(dev, std::abs(summary.fn_mean[p] - plain.window_fidelities[p]));
    if (prev > 0.0) CHECK(dev < 0.6 * prev);
    prev = dev;
  }
}

TEST_CASE("perturbations do not improve on the optimum, statistically") {
  const DrivingConfig config(10, 4, 0.05);
  const OptimizationResult r = solve_third_order(config);

  RobustnessConfig rc;
  rc.delta = delta_max(config) / 4.0;
  rc.trials = 30;
  rc.n_periods = 3;
  rc.seed = 31;
  const RobustnessSummary summary = robustness_sweep(r.pulse, config, rc, 64);
  const FidelityReport plain =
      fidelity_windows(propagate(r.pulse, config, 3, 64), config);
  for (int p = 0; p < 3; ++p)
    CHECK(summary.fn_mean[p] >= plain.window_fidelities[p] - 2.0 * summary.fn_stderr[p]);
}

TEST_CASE("a failing trial aborts the sweep with its index") {
  const DrivingConfig config(4, 4, 0.05);
  const Pulse pulse = monochromatic_pulse(config);
  RobustnessConfig rc;
  rc.delta = 0.0;
  rc.trials = 2;
  rc.n_periods = 1;
  IntegratorOptions impossible;
  impossible.drift_tolerance = 1e-18;
  try {
    robustness_sweep(pulse, config, rc, 64, impossible);
    FAIL("expected a trial failure");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("trial 0") != std::string::npos);
  }
}

TEST_CASE("sweep validates its configuration") {
  const DrivingConfig config(4, 4, 0.05);
  const Pulse pulse = monochromatic_pulse(config);
  RobustnessConfig rc;
  rc.trials = 0;
  CHECK_THROWS_AS(robustness_sweep(pulse, config, rc, 64), std::invalid_argument);
  rc = {};
  rc.delta = -0.1;
  CHECK_THROWS_AS(robustness_sweep(pulse, config, rc, 64), std::invalid_argument);
  rc = {};
  rc.n_periods = 0;
  CHECK_THROWS_AS(robustness_sweep(pulse, config, rc, 64), std::invalid_argument);
}
