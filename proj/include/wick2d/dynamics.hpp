#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wick2d/field.hpp"
#include "wick2d/gibbs.hpp"

namespace wick2d {

struct NlsState {
  FourierField field;
  double time = 0.0;
  int truncation_N = 1;
};

enum class NlsMode {
  Ungauged,  // (|P_N u|^2 - 2 sigma_N) P_N u forcing
  Gauged,    // sigma_N replaced by ||P_N u||^2
  Bare       // no renormalization (control runs)
};

struct IntegratorConfig {
  double dt = 1e-3;
  std::string scheme = "ip-rk4";       // interaction-picture explicit RK4
  double tolerance = 1e-6;             // energy-drift/unit-time rejection; <= 0 disables
  int record_stride = 1;               // 0 = endpoints only
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> energy;  // 1/2 int |grad u|^2 + 1/4 int :|P_N u|^4:
  NlsState final_state;
};

// Nonlinear part of du/dt: -i P_N{(|P_N u|^2 - c) P_N u} with the
// mode-dependent constant c; high modes receive zero forcing.
FourierField rhs(const NlsState& state, NlsMode mode);

// alpha_N = ||P_N u(0)||^2 - sigma_N
double alpha_constant(const NlsState& state0);

// low modes times e^{2 i t alpha}, high modes unchanged
FourierField gauge_transform(const FourierField& u, double t, double alpha, int N);

double mass_observable(const FourierField& u);
double wick_energy(const FourierField& u, int N);

TrajectoryRecord evolve(const NlsState& state, double t_end,
                        const IntegratorConfig& config, NlsMode mode);

// sup over recorded times of || gauge(u_A(t)) - v_B(t) ||_{L^2}
double gauge_equivalence_check(const FourierField& u0, int N, double t_end,
                               const IntegratorConfig& config);

struct ResidualCurve {
  std::vector<double> times;
  std::vector<double> hs_norms;  // || v(t) - e^{it Delta} u0 ||_{H^s}
};

ResidualCurve residual_diagnostic(const FourierField& u0, int N, double t_end,
                                  const IntegratorConfig& config, double s);

struct ObservableReport {
  std::string name;
  double mean_z = 0.0;  // z-score of the weighted mean difference (t_end vs 0)
  double var_z = 0.0;   // z-score of the weighted variance difference
  double mean_diff = 0.0;
  double se = 0.0;
};

struct InvarianceReport {
  std::vector<ObservableReport> observables;
  double ess = 0.0;
  int n_samples = 0;
  bool inconclusive = false;  // ESS below floor
  bool control = false;
};

InvarianceReport invariance_test(int N, double t_end, int n_samples,
                                 std::uint64_t seed, const IntegratorConfig& config,
                                 bool control = false, double ess_floor_frac = 0.1);

}  // namespace wick2d
