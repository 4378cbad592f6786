#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"polydrive: polychromatic Raman-drive synthesis and verification for the "
               "three-level Lambda system (all quantities in units of omega and T)"};
  app.require_subcommand(1);

  polydrive::cli::OptimizeArgs optimize_args;
  auto* optimize = app.add_subcommand(
      "optimize", "Solve for optimal pulse Fourier components, write them as JSON");
  optimize->add_option("--omega-tg", optimize_args.omega_tg, "target Raman rate, units of omega")
      ->required();
  optimize->add_option("--n", optimize_args.n_harmonics, "number of Fourier components N")
      ->required();
  optimize->add_option("--n0", optimize_args.n0, "counter-rotating index n0")->required();
  optimize->add_option("--order", optimize_args.order, "constraint order, 2 or 3")
      ->default_val(3);
  optimize->add_option("--tol", optimize_args.tol, "residual tolerance")->default_val(1e-12);
  optimize->add_option("--max-iter", optimize_args.max_iter, "Newton iteration cap")
      ->default_val(100);
  optimize->add_option("--out", optimize_args.out, "output JSON path")->required();

  polydrive::cli::SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand(
      "simulate", "Propagate a pulse and write population/fidelity traces as CSV");
  simulate->add_option("--pulse", simulate_args.pulse, "pulse JSON path, or \"mc\"")->required();
  simulate->add_option("--omega-tg", simulate_args.omega_tg, "target Raman rate, units of omega")
      ->required();
  simulate->add_option("--n", simulate_args.n_harmonics, "number of Fourier components N")
      ->required();
  simulate->add_option("--n0", simulate_args.n0, "counter-rotating index n0")->required();
  simulate->add_option("--periods", simulate_args.periods, "number of driving periods")
      ->default_val(1);
  simulate->add_option("--samples", simulate_args.samples, "samples per period (even, >= 64)")
      ->default_val(256);
  simulate->add_option("--out", simulate_args.out, "output CSV path (summary at <out>.json)")
      ->required();

  polydrive::cli::SweepArgs sweep_args;
  auto* sweep = app.add_subcommand(
      "sweep-n", "Optimize across a range of N and tabulate lambda1 and predicted F^(2)");
  sweep->add_option("--omega-tg", sweep_args.omega_tg, "target Raman rate, units of omega")
      ->required();
  sweep->add_option("--n0", sweep_args.n0, "counter-rotating index n0")->required();
  sweep->add_option("--n-min", sweep_args.n_min, "smallest N")->required();
  sweep->add_option("--n-max", sweep_args.n_max, "largest N")->required();
  sweep->add_option("--order", sweep_args.order, "constraint order, 2 or 3")->default_val(2);
  sweep->add_option("--tol", sweep_args.tol, "residual tolerance")->default_val(1e-12);
  sweep->add_option("--max-iter", sweep_args.max_iter, "Newton iteration cap")->default_val(100);
  sweep->add_option("--out", sweep_args.out, "output CSV path (manifest at <out>.json)")
      ->required();

  polydrive::cli::RobustnessArgs robustness_args;
  auto* robustness = app.add_subcommand(
      "robustness", "Average window fidelities over randomly perturbed pulses");
  robustness->add_option("--pulse", robustness_args.pulse, "pulse JSON path (with manifest)")
      ->required();
  robustness
      ->add_option("--delta", robustness_args.delta,
                   "perturbation half-width in units of omega, or \"auto-quarter\" for delta_max/4")
      ->required();
  robustness->add_option("--trials", robustness_args.trials, "number of realizations")
      ->default_val(100);
  robustness->add_option("--periods", robustness_args.periods, "evaluation horizon in periods")
      ->default_val(50);
  robustness->add_option("--seed", robustness_args.seed, "seed of the deterministic stream")
      ->default_val(0);
  robustness->add_option("--out", robustness_args.out, "output CSV path (metadata at <out>.json)")
      ->required();

  int exit_code = 0;
  optimize->callback([&] { exit_code = polydrive::cli::run_optimize(optimize_args); });
  simulate->callback([&] { exit_code = polydrive::cli::run_simulate(simulate_args); });
  sweep->callback([&] { exit_code = polydrive::cli::run_sweep(sweep_args); });
  robustness->callback([&] { exit_code = polydrive::cli::run_robustness(robustness_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors exit 1, --help exits 0
  }
  return exit_code;
}
