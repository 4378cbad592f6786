#pragma once

#include <cstdint>
#include <string>

namespace polydrive::cli {

// Exit codes shared by all subcommands: 0 success, 1 usage or input error,
// 2 numerical failure.

struct OptimizeArgs {
  double omega_tg = 0.0;
  int n_harmonics = 0;
  int n0 = 0;
  int order = 3;
  double tol = 1e-12;
  int max_iter = 100;
  std::string out;
};

struct SimulateArgs {
  std::string pulse;  // path to a pulse JSON, or the literal "mc"
  double omega_tg = 0.0;
  int n_harmonics = 0;
  int n0 = 0;
  int periods = 1;
  int samples = 256;
  std::string out;
};

struct SweepArgs {
  double omega_tg = 0.0;
  int n0 = 0;
  int n_min = 0;
  int n_max = 0;
  int order = 2;
  double tol = 1e-12;
  int max_iter = 100;
  std::string out;
};

struct RobustnessArgs {
  std::string pulse;           // path to a pulse JSON with manifest
  std::string delta;           // real number or "auto-quarter"
  int trials = 100;
  int periods = 50;
  std::uint64_t seed = 0;
  std::string out;
};

int run_optimize(const OptimizeArgs& args);
int run_simulate(const SimulateArgs& args);
int run_sweep(const SweepArgs& args);
int run_robustness(const RobustnessArgs& args);

}  // namespace polydrive::cli
