#include "polydrive/optimizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "polydrive/magnus.hpp"

namespace polydrive {

namespace {

constexpr double kMinDamping = 9.5367431640625e-7;  // 2^-20

void validate_options(const SolverOptions& options) {
  if (!(options.tol > 0.0) || !(options.bisect_tol > 0.0))
    throw std::invalid_argument("SolverOptions: tolerances must be positive");
  if (options.max_iter < 1)
    throw std::invalid_argument("SolverOptions: max_iter must be >= 1");
  if (!(options.damping > 0.0) || options.damping > 1.0)
    throw std::invalid_argument("SolverOptions: damping must lie in (0, 1]");
}

// Per-harmonic tables of the inverse weights w_p(n) = 1/n~(p) and of the pole
// locations g_n = n~(1)/n~(2) = w2/w1.
struct WeightTable {
  std::vector<double> w1, w2, w3, g;

  WeightTable(const DrivingConfig& config, bool need_w3) {
    const int n = config.n_harmonics();
    w1.resize(n);
    w2.resize(n);
    if (need_w3) w3.resize(n);
    g.resize(n);
    for (int k = 0; k < n; ++k) {
      w1[k] = 1.0 / harmonic_weight(k + 1, 1, config);
      w2[k] = 1.0 / harmonic_weight(k + 1, 2, config);
      if (need_w3) w3[k] = 1.0 / harmonic_weight(k + 1, 3, config);
      g[k] = w2[k] / w1[k];
    }
  }

  // The bisection bracket relies on g being strictly decreasing; it is for
  // all n0 >= 1, but verify rather than assume.
  void require_monotone_poles() const {
    for (std::size_t k = 1; k < g.size(); ++k)
      if (!(g[k] < g[k - 1])) {
        std::ostringstream msg;
        msg << "pole ratios g_n are not strictly decreasing at n = " << k + 1
            << " (g = " << g[k - 1] << ", " << g[k] << ")";
        throw SolverFailure(msg.str(), {});
      }
  }
};

}  // namespace

OptimizationResult solve_second_order(const DrivingConfig& config,
                                      const SolverOptions& options) {
  validate_options(options);
  const int n = config.n_harmonics();
  if (n < 2)
    throw SolverFailure(
        "second-order constraint pair is infeasible for N = 1: the balance "
        "constraint would force the single component to zero",
        {});

  const WeightTable w(config, false);
  w.require_monotone_poles();

  // Balance condition S(lambda1) = sum_n w1_n / (g_n - lambda1) = 0. S is
  // strictly increasing between consecutive poles and negative below them
  // all, so the minimal root lies in (g_N, g_{N-1}); it minimizes
  // F^(2) = 4 lambda1 Omega_tg.
  const auto balance_sum = [&](double lambda) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += w.w1[k] / (w.g[k] - lambda);
    return s;
  };

  const double pole_low = w.g[n - 1];
  const double pole_high = w.g[n - 2];
  const double gap = pole_high - pole_low;

  double offset = 1e-6 * gap;
  double a = 0.0, b = 0.0;
  bool bracketed = false;
  for (int attempt = 0; attempt < 5 && !bracketed; ++attempt, offset *= 1e-3) {
    a = pole_low + offset;
    b = pole_high - offset;
    bracketed = balance_sum(a) < 0.0 && balance_sum(b) > 0.0;
  }
  if (!bracketed) {
    std::ostringstream msg;
    msg << "failed to bracket the minimal root in (" << pole_low << ", " << pole_high
        << "): S(a) = " << balance_sum(a) << ", S(b) = " << balance_sum(b);
    throw SolverFailure(msg.str(), {});
  }

  for (int it = 0; it < 200 && (b - a) > options.bisect_tol * std::max(std::abs(a), std::abs(b));
       ++it) {
    const double mid = 0.5 * (a + b);
    (balance_sum(mid) < 0.0 ? a : b) = mid;
  }
  double lambda1 = 0.5 * (a + b);

  // Newton polish; S' = sum w1_n/(g_n - lambda)^2 > 0.
  for (int it = 0; it < 2; ++it) {
    double sp = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = w.g[k] - lambda1;
      sp += w.w1[k] / (d * d);
    }
    const double next = lambda1 - balance_sum(lambda1) / sp;
    if (next > pole_low && next < pole_high) lambda1 = next;
  }

  // Rate constraint fixes |lambda2|; the sign makes f_N positive.
  double denom = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = w.g[k] - lambda1;
    denom += w.w1[k] / (d * d);
  }
  double lambda2 = std::sqrt(config.omega_tg() / denom);
  if (lambda2 / (w.g[n - 1] - lambda1) < 0.0) lambda2 = -lambda2;

  OptimizationResult result;
  result.pulse = Pulse::zero(n);
  for (int k = 0; k < n; ++k)
    result.pulse.amplitudes[k] = lambda2 / (w.g[k] - lambda1);
  result.lambda1 = lambda1;
  result.lambda2 = lambda2;
  result.order = 2;
  result.iterations = 0;
  result.residual_norm = constraints(result.pulse, config, 2).max_active();

  if (!(result.residual_norm <= options.tol)) {
    std::ostringstream msg;
    msg << "second-order residual " << result.residual_norm << " exceeds tolerance";
    throw SolverFailure(msg.str(), result);
  }
  return result;
}

OptimizationResult solve_third_order(const DrivingConfig& config,
                                     const SolverOptions& options,
                                     const std::optional<Pulse>& initial) {
  validate_options(options);
  const int n = config.n_harmonics();
  if (n < 2)
    throw SolverFailure("third-order constraint set is infeasible for N = 1", {});

  const WeightTable w(config, true);
  const double omega_tg = config.omega_tg();

  // Unknowns x = (f_1..f_N, lambda1, lambda2). Equations: stationarity of the
  // fluctuation functional for each component, the balance constraint, and
  // the third-order rate constraint.
  const OptimizationResult warm = solve_second_order(config, options);
  Eigen::VectorXd x(n + 2);
  if (initial) {
    detail::require_pulse_match(*initial, config);
    for (int k = 0; k < n; ++k) x(k) = initial->amplitudes[k];
  } else {
    for (int k = 0; k < n; ++k) x(k) = warm.pulse.amplitudes[k];
  }
  x(n) = warm.lambda1;
  x(n + 1) = warm.lambda2;

  struct Moments {
    double a1, a2, b3;
  };
  const auto moments = [&](const Eigen::VectorXd& v) -> Moments {
    Moments m{0.0, 0.0, 0.0};
    for (int k = 0; k < n; ++k) {
      const double f2 = v(k) * v(k);
      m.a1 += f2 * w.w1[k];
      m.a2 += f2 * w.w2[k];
      m.b3 += f2 * f2 * w.w3[k];
    }
    return m;
  };

  const auto residual = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    const Moments m = moments(v);
    const double l1 = v(n), l2 = v(n + 1);
    Eigen::VectorXd r(n + 2);
    double balance = 0.0;
    for (int k = 0; k < n; ++k) {
      const double f = v(k);
      r(k) = f * ((1.0 + 4.0 * m.a1 * l1) * w.w2[k] - l1 * (1.0 - 4.0 * m.a2) * w.w1[k]) -
             4.0 * l1 * f * f * f * w.w3[k] - l2 * w.w1[k];
      balance += f * w.w1[k];
    }
    r(n) = balance;
    r(n + 1) = m.a1 + 2.0 * m.b3 - 4.0 * m.a1 * m.a2 - omega_tg;
    return r;
  };

  const auto jacobian = [&](const Eigen::VectorXd& v) -> Eigen::MatrixXd {
    const Moments m = moments(v);
    const double l1 = v(n), l2 = v(n + 1);
    (void)l2;
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n + 2, n + 2);
    for (int k = 0; k < n; ++k) {
      const double f = v(k);
      // dA1/df_m = 2 f_m w1_m, dA2/df_m = 2 f_m w2_m, dB3/df_m = 4 f_m^3 w3_m.
      for (int mm = 0; mm < n; ++mm) {
        const double fm = v(mm);
        j(k, mm) = 8.0 * l1 * f * fm * (w.w1[mm] * w.w2[k] + w.w2[mm] * w.w1[k]);
      }
      j(k, k) += (1.0 + 4.0 * m.a1 * l1) * w.w2[k] - l1 * (1.0 - 4.0 * m.a2) * w.w1[k] -
                 12.0 * l1 * f * f * w.w3[k];
      j(k, n) = 4.0 * m.a1 * f * w.w2[k] - f * (1.0 - 4.0 * m.a2) * w.w1[k] -
                4.0 * f * f * f * w.w3[k];
      j(k, n + 1) = -w.w1[k];
      j(n, k) = w.w1[k];
      j(n + 1, k) = 2.0 * v(k) * w.w1[k] + 8.0 * v(k) * v(k) * v(k) * w.w3[k] -
                    8.0 * v(k) * (m.a2 * w.w1[k] + m.a1 * w.w2[k]);
    }
    return j;
  };

  const auto partial_result = [&](const Eigen::VectorXd& v, double rnorm, int iters) {
    OptimizationResult p;
    p.pulse = Pulse::zero(n);
    for (int k = 0; k < n; ++k) p.pulse.amplitudes[k] = v(k);
    p.lambda1 = v(n);
    p.lambda2 = v(n + 1);
    p.order = 3;
    p.residual_norm = rnorm;
    p.iterations = iters;
    return p;
  };

  Eigen::VectorXd r = residual(x);
  double rnorm = r.lpNorm<Eigen::Infinity>();
  int iterations = 0;

  while (rnorm > options.tol) {
    if (!std::isfinite(rnorm) || rnorm > 1e6) {
      std::ostringstream msg;
      msg << "Newton iteration diverged (residual " << rnorm << ")";
      throw SolverFailure(msg.str(), partial_result(x, rnorm, iterations));
    }
    if (iterations >= options.max_iter) {
      std::ostringstream msg;
      msg << "no convergence after " << options.max_iter << " iterations (residual " << rnorm
          << ")";
      throw SolverFailure(msg.str(), partial_result(x, rnorm, iterations));
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(jacobian(x));
    if (!lu.isInvertible())
      throw SolverFailure("singular Jacobian", partial_result(x, rnorm, iterations));
    const Eigen::VectorXd step = lu.solve(-r);

    // Backtrack on the residual max-norm.
    double alpha = options.damping;
    Eigen::VectorXd x_next;
    Eigen::VectorXd r_next;
    double rnorm_next;
    while (true) {
      x_next = x + alpha * step;
      r_next = residual(x_next);
      rnorm_next = r_next.lpNorm<Eigen::Infinity>();
      if (rnorm_next < rnorm) break;
      alpha *= 0.5;
      if (alpha < kMinDamping) {
        std::ostringstream msg;
        msg << "line search stagnated (residual " << rnorm << ")";
        throw SolverFailure(msg.str(), partial_result(x, rnorm, iterations));
      }
    }
    x = x_next;
    r = r_next;
    rnorm = rnorm_next;
    ++iterations;
  }

  // (f, lambda2) -> (-f, -lambda2) is an exact symmetry of the system; pin
  // the representative with f_N > 0.
  if (x(n - 1) < 0.0) {
    for (int k = 0; k < n; ++k) x(k) = -x(k);
    x(n + 1) = -x(n + 1);
    r = residual(x);
    rnorm = r.lpNorm<Eigen::Infinity>();
  }

  OptimizationResult result = partial_result(x, rnorm, iterations);
  result.residual_norm = std::max(rnorm, constraints(result.pulse, config, 3).max_active());
  if (!(result.residual_norm <= options.tol)) {
    std::ostringstream msg;
    msg << "third-order residual " << result.residual_norm << " exceeds tolerance";
    throw SolverFailure(msg.str(), result);
  }
  return result;
}

}  // namespace polydrive
