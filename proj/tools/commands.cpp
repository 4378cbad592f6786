#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "io.hpp"
#include "polydrive/magnus.hpp"
#include "polydrive/optimizer.hpp"
#include "polydrive/robustness.hpp"
#include "polydrive/simulator.hpp"
#include "polydrive/types.hpp"

namespace polydrive::cli {

namespace {

nlohmann::json result_to_json(const OptimizationResult& result, const DrivingConfig& config) {
  nlohmann::json j;
  j["pulse"] = result.pulse.amplitudes;
  j["lambda1"] = result.lambda1;
  j["lambda2"] = result.lambda2;
  j["order"] = result.order;
  j["residual_norm"] = result.residual_norm;
  j["iterations"] = result.iterations;
  if (result.pulse.size() == config.n_harmonics())
    j["predicted_f2"] = constraints(result.pulse, config, result.order).predicted_f2;
  else
    j["predicted_f2"] = nullptr;
  return j;
}

int input_error(const std::string& what) {
  std::cerr << "polydrive: error: " << what << "\n";
  return 1;
}

int numeric_error(const std::string& what) {
  std::cerr << "polydrive: error: " << what << "\n";
  return 2;
}

}  // namespace

int run_optimize(const OptimizeArgs& args) {
  nlohmann::json manifest = make_manifest("optimize", {{"omega_tg", args.omega_tg},
                                                       {"n_harmonics", args.n_harmonics},
                                                       {"n0", args.n0},
                                                       {"order", args.order},
                                                       {"tol", args.tol},
                                                       {"max_iter", args.max_iter},
                                                       {"out", args.out}});
  try {
    const DrivingConfig config(args.n_harmonics, args.n0, args.omega_tg);
    if (args.order != 2 && args.order != 3)
      return input_error("--order must be 2 or 3");
    SolverOptions options;
    options.tol = args.tol;
    options.max_iter = args.max_iter;

    try {
      const OptimizationResult result = args.order == 2 ? solve_second_order(config, options)
                                                        : solve_third_order(config, options);
      nlohmann::json j = result_to_json(result, config);
      j["manifest"] = manifest;
      write_text_file(args.out, j.dump(2) + "\n");
      return 0;
    } catch (const SolverFailure& failure) {
      nlohmann::json j = result_to_json(failure.partial(), config);
      j["error"] = failure.what();
      j["manifest"] = manifest;
      write_text_file(args.out, j.dump(2) + "\n");
      return numeric_error(failure.what());
    }
  } catch (const std::invalid_argument& e) {
    return input_error(e.what());
  } catch (const std::exception& e) {
    return numeric_error(e.what());
  }
}

int run_simulate(const SimulateArgs& args) {
  try {
    const DrivingConfig config(args.n_harmonics, args.n0, args.omega_tg);

    Pulse pulse;
    if (args.pulse == "mc") {
      pulse = monochromatic_pulse(config);
    } else {
      const LoadedPulse loaded = load_pulse_file(args.pulse);
      pulse = loaded.pulse;
      const auto& params = loaded.manifest_parameters;
      if (!params.is_null()) {
        // The flags define the run; mismatches against the pulse's own
        // provenance are suspicious enough to flag, not fatal.
        if (params.value("n0", args.n0) != args.n0 ||
            std::abs(params.value("omega_tg", args.omega_tg) - args.omega_tg) > 1e-12)
          std::cerr << "polydrive: warning: pulse file " << args.pulse
                    << " was produced for different parameters than the flags given\n";
      }
    }

    const UnitaryTrajectory trajectory =
        propagate(pulse, config, args.periods, args.samples);
    const FidelityReport report = fidelity_windows(trajectory, config);

    std::ostringstream csv;
    csv << "t_over_T,P2,P3,P2_target,F_window_index,F_n\n";
    const int spp = trajectory.samples_per_period;
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
      const double t_over_period = trajectory.times[k];
      const double target_p2 = std::pow(std::sin(config.omega_tg() * t_over_period * kPeriod), 2);
      const std::size_t window = k == 0 ? 1 : (k + spp - 1) / spp;
      csv << format_double(t_over_period) << ',' << format_double(report.p2[k]) << ','
          << format_double(report.p3[k]) << ',' << format_double(target_p2) << ',' << window
          << ',' << format_double(report.window_fidelities[window - 1]) << '\n';
    }
    write_text_file(args.out, csv.str());

    nlohmann::json summary;
    summary["max_p3"] = report.max_p3;
    summary["F_n"] = report.window_fidelities;
    summary["predicted_f2"] = report.predicted_f2;
    summary["manifest"] = make_manifest("simulate", {{"pulse", args.pulse},
                                                     {"omega_tg", args.omega_tg},
                                                     {"n_harmonics", args.n_harmonics},
                                                     {"n0", args.n0},
                                                     {"periods", args.periods},
                                                     {"samples", args.samples},
                                                     {"out", args.out}});
    write_text_file(args.out + ".json", summary.dump(2) + "\n");
    return 0;
  } catch (const IntegrationError& e) {
    return input_error(e.what());
  } catch (const std::invalid_argument& e) {
    return input_error(e.what());
  } catch (const std::exception& e) {
    return numeric_error(e.what());
  }
}

int run_sweep(const SweepArgs& args) {
  try {
    if (args.n_min < 1 || args.n_max < args.n_min)
      return input_error("--n-min/--n-max must satisfy 1 <= n-min <= n-max");
    if (args.order != 2 && args.order != 3)
      return input_error("--order must be 2 or 3");

    SolverOptions options;
    options.tol = args.tol;
    options.max_iter = args.max_iter;

    std::ostringstream csv;
    csv << "N,lambda1,predicted_f2\n";
    nlohmann::json errors = nlohmann::json::array();
    for (int n = args.n_min; n <= args.n_max; ++n) {
      try {
        const DrivingConfig config(n, args.n0, args.omega_tg);
        const OptimizationResult result = args.order == 2 ? solve_second_order(config, options)
                                                          : solve_third_order(config, options);
        const double predicted = constraints(result.pulse, config, args.order).predicted_f2;
        csv << n << ',' << format_double(result.lambda1) << ',' << format_double(predicted)
            << '\n';
      } catch (const std::exception& e) {
        csv << n << ",nan,nan\n";
        errors.push_back({{"N", n}, {"message", e.what()}});
      }
    }
    write_text_file(args.out, csv.str());

    nlohmann::json meta;
    meta["errors"] = errors;
    meta["manifest"] = make_manifest("sweep-n", {{"omega_tg", args.omega_tg},
                                                 {"n0", args.n0},
                                                 {"n_min", args.n_min},
                                                 {"n_max", args.n_max},
                                                 {"order", args.order},
                                                 {"tol", args.tol},
                                                 {"max_iter", args.max_iter},
                                                 {"out", args.out}});
    write_text_file(args.out + ".json", meta.dump(2) + "\n");

    if (!errors.empty())
      return numeric_error(std::to_string(errors.size()) + " sweep point(s) failed");
    return 0;
  } catch (const std::invalid_argument& e) {
    return input_error(e.what());
  } catch (const std::exception& e) {
    return numeric_error(e.what());
  }
}

int run_robustness(const RobustnessArgs& args) {
  try {
    const LoadedPulse loaded = load_pulse_file(args.pulse);
    const auto& params = loaded.manifest_parameters;
    if (params.is_null() || !params.contains("omega_tg") || !params.contains("n_harmonics") ||
        !params.contains("n0"))
      return input_error("pulse file " + args.pulse +
                         " carries no manifest parameters (omega_tg, n_harmonics, n0)");
    const DrivingConfig config(params["n_harmonics"].get<int>(), params["n0"].get<int>(),
                               params["omega_tg"].get<double>());
    detail::require_pulse_match(loaded.pulse, config);

    const double scale = delta_max(config);
    double delta = 0.0;
    if (args.delta == "auto-quarter") {
      delta = scale / 4.0;
    } else {
      char* end = nullptr;
      delta = std::strtod(args.delta.c_str(), &end);
      if (end == args.delta.c_str() || *end != '\0')
        return input_error("--delta must be a real number or \"auto-quarter\"");
      if (!(delta >= 0.0) || !std::isfinite(delta))
        return input_error("--delta must be nonnegative and finite");
    }

    RobustnessConfig robustness_config;
    robustness_config.delta = delta;
    robustness_config.trials = args.trials;
    robustness_config.n_periods = args.periods;
    robustness_config.seed = args.seed;

    const RobustnessSummary summary =
        robustness_sweep(loaded.pulse, config, robustness_config);

    std::ostringstream csv;
    csv << "n,Fn_mean,Fn_stderr\n";
    for (int n = 0; n < args.periods; ++n)
      csv << n + 1 << ',' << format_double(summary.fn_mean[n]) << ','
          << format_double(summary.fn_stderr[n]) << '\n';
    write_text_file(args.out, csv.str());

    nlohmann::json meta;
    meta["delta"] = delta;
    meta["delta_max"] = scale;
    meta["seed"] = args.seed;
    meta["trials"] = args.trials;
    meta["periods"] = args.periods;
    meta["pulse"] = loaded.pulse.amplitudes;
    meta["omega_tg"] = config.omega_tg();
    meta["n_harmonics"] = config.n_harmonics();
    meta["n0"] = config.n0();
    meta["manifest"] = make_manifest("robustness", {{"pulse", args.pulse},
                                                    {"delta", args.delta},
                                                    {"trials", args.trials},
                                                    {"periods", args.periods},
                                                    {"seed", args.seed},
                                                    {"out", args.out}});
    write_text_file(args.out + ".json", meta.dump(2) + "\n");
    return 0;
  } catch (const std::invalid_argument& e) {
    return input_error(e.what());
  } catch (const std::exception& e) {
    return numeric_error(e.what());
  }
}

}  // namespace polydrive::cli
