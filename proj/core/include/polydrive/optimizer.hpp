#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "polydrive/types.hpp"

namespace polydrive {

struct SolverOptions {
  double tol = 1e-12;        // convergence tolerance on the residual max-norm
  int max_iter = 100;        // Newton iteration cap
  double bisect_tol = 1e-14; // relative bracket width for the lambda1 bisection
  double damping = 1.0;      // initial Newton step scale, halved on residual increase down to 2^-20
};

/// Raised on solver infeasibility, divergence or non-convergence. Carries the
/// last iterate so callers can report partial residuals.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, OptimizationResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}

  const OptimizationResult& partial() const { return partial_; }

 private:
  OptimizationResult partial_;
};

/// Analytic minimizer of the leading-order fluctuations under the order-2
/// constraint pair. The stationary pulses are f_n = lambda2 / (g_n - lambda1)
/// with g_n = n~(1)/n~(2); the global minimum is the minimal root of the
/// balance condition, bracketed between the two smallest poles g_N and
/// g_{N-1} (g is strictly decreasing) and located by bisection. Requires
/// N >= 2: with one component the balance constraint would force f_1 = 0.
/// Sign convention f_N > 0.
OptimizationResult solve_second_order(const DrivingConfig& config,
                                      const SolverOptions& options = {});

/// Damped Newton solve of the order-3 system: per-component stationarity,
/// balance, and the third-order rate constraint, in the unknowns
/// (f_1..f_N, lambda1, lambda2) with analytic Jacobian. Warm-started from the
/// second-order solution unless an initial pulse is supplied. Requires N >= 2.
OptimizationResult solve_third_order(const DrivingConfig& config,
                                     const SolverOptions& options = {},
                                     const std::optional<Pulse>& initial = std::nullopt);

}  // namespace polydrive
