#pragma once

#include <cstdint>
#include <vector>

#include "polydrive/optimizer.hpp"
#include "polydrive/simulator.hpp"
#include "polydrive/types.hpp"

namespace polydrive {

/// Counter-based random stream (splitmix64). Trial k draws from a substream
/// derived from (seed, k) alone, so results are reproducible and independent
/// of execution order.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t state) : state_(state) {}

  static RandomStream for_trial(std::uint64_t seed, std::uint64_t trial);

  std::uint64_t next();
  double uniform(double lo, double hi);

 private:
  std::uint64_t state_;
};

struct RobustnessConfig {
  double delta = 0.0;      // perturbation half-width, units of omega
  int trials = 100;
  int n_periods = 50;      // evaluation horizon
  std::uint64_t seed = 0;
};

struct RobustnessSummary {
  std::vector<double> fn_mean;    // per-period mean of F_n across trials
  std::vector<double> fn_stderr;  // standard error of the mean (0 for a single trial)
  std::vector<std::vector<double>> trial_fn;  // [trial][period], kept so aggregation stays associative
  double delta = 0.0;
  std::uint64_t seed = 0;
  int trials = 0;
};

/// Adds an independent Uniform[-delta, delta] draw to every Fourier component.
Pulse perturb(const Pulse& pulse, double delta, RandomStream& stream);

/// Uncertainty scale delta_max = max_n |f_n^(3) - f_n^(2)|, the largest
/// difference between the third- and second-order optimal components.
double delta_max(const DrivingConfig& config, const SolverOptions& options = {});

/// Monte Carlo sweep: perturb, propagate over n_periods and collect F_n for
/// each trial, then average. Trials run in parallel; the result depends only
/// on (pulse, configs, seed). A failed trial aborts with its index.
RobustnessSummary robustness_sweep(const Pulse& pulse, const DrivingConfig& config,
                                   const RobustnessConfig& robustness_config,
                                   int samples_per_period = 256,
                                   const IntegratorOptions& integrator_options = {});

}  // namespace polydrive
