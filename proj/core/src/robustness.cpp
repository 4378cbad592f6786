#include "polydrive/robustness.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace polydrive {

RandomStream RandomStream::for_trial(std::uint64_t seed, std::uint64_t trial) {
  // Start each trial from a bit-mixed state; a plain additive offset would
  // put every trial on the same orbit, one draw apart.
  RandomStream seeder(seed + 0x9e3779b97f4a7c15ull * (trial + 1));
  return RandomStream(seeder.next());
}

std::uint64_t RandomStream::next() {
  // splitmix64
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double RandomStream::uniform(double lo, double hi) {
  const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;  // [0, 1)
  return lo + u * (hi - lo);
}

Pulse perturb(const Pulse& pulse, double delta, RandomStream& stream) {
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("perturb: delta must be nonnegative and finite");
  Pulse perturbed = pulse;
  for (double& f : perturbed.amplitudes)
    f += stream.uniform(-delta, delta);
  return perturbed;
}

double delta_max(const DrivingConfig& config, const SolverOptions& options) {
  const OptimizationResult second = solve_second_order(config, options);
  const OptimizationResult third = solve_third_order(config, options);
  double scale = 0.0;
  for (int k = 0; k < config.n_harmonics(); ++k)
    scale = std::max(scale,
                     std::abs(third.pulse.amplitudes[k] - second.pulse.amplitudes[k]));
  return scale;
}

RobustnessSummary robustness_sweep(const Pulse& pulse, const DrivingConfig& config,
                                   const RobustnessConfig& robustness_config,
                                   int samples_per_period,
                                   const IntegratorOptions& integrator_options) {
  detail::require_pulse_match(pulse, config);
  if (!(robustness_config.delta >= 0.0) || !std::isfinite(robustness_config.delta))
    throw std::invalid_argument("robustness_sweep: delta must be nonnegative and finite");
  if (robustness_config.trials < 1)
    throw std::invalid_argument("robustness_sweep: trials must be >= 1");
  if (robustness_config.n_periods < 1)
    throw std::invalid_argument("robustness_sweep: n_periods must be >= 1");

  const int trials = robustness_config.trials;
  const int n_periods = robustness_config.n_periods;

  RobustnessSummary summary;
  summary.delta = robustness_config.delta;
  summary.seed = robustness_config.seed;
  summary.trials = trials;
  summary.trial_fn.assign(trials, {});

  std::vector<std::string> failures(trials);
  std::atomic<int> next_trial{0};

  const auto worker = [&]() {
    for (int k = next_trial.fetch_add(1); k < trials; k = next_trial.fetch_add(1)) {
      try {
        RandomStream stream = RandomStream::for_trial(robustness_config.seed,
                                                      static_cast<std::uint64_t>(k));
        const Pulse trial_pulse = perturb(pulse, robustness_config.delta, stream);
        const UnitaryTrajectory trajectory =
            propagate(trial_pulse, config, n_periods, samples_per_period, integrator_options);
        summary.trial_fn[k] = fidelity_windows(trajectory, config).window_fidelities;
      } catch (const std::exception& e) {
        failures[k] = e.what();
        if (failures[k].empty()) failures[k] = "unknown error";
      }
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_threads = std::min<unsigned>(hw, static_cast<unsigned>(trials));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  for (int k = 0; k < trials; ++k)
    if (!failures[k].empty())
      throw std::runtime_error("robustness_sweep: trial " + std::to_string(k) +
                               " failed: " + failures[k]);

  // Mean and standard error per period, accumulated in trial order.
  summary.fn_mean.assign(n_periods, 0.0);
  summary.fn_stderr.assign(n_periods, 0.0);
  for (int p = 0; p < n_periods; ++p) {
    double mean = 0.0;
    for (int k = 0; k < trials; ++k) mean += summary.trial_fn[k][p];
    mean /= trials;
    summary.fn_mean[p] = mean;
    if (trials > 1) {
      double ss = 0.0;
      for (int k = 0; k < trials; ++k) {
        const double d = summary.trial_fn[k][p] - mean;
        ss += d * d;
      }
      summary.fn_stderr[p] = std::sqrt(ss / (static_cast<double>(trials) - 1.0) / trials);
    }
  }
  return summary;
}

}  // namespace polydrive
