#pragma once

#include <functional>
#include <optional>

#include "wick2d/field.hpp"
#include "wick2d/window.hpp"

namespace wick2d {

struct XsbParams {
  double s = 0.0;
  double b = 0.0;
  double eps = 0.01;

  static XsbParams standard(double s, double eps = 0.01) {
    return {s, 0.5 + eps, eps};
  }
  // the dual exponent b' = 1/2 - 2 eps
  static double b_prime(double eps) { return 0.5 - 2.0 * eps; }
};

// Uniform time grid t_j = t0 + j*dt, j = 0..count-1, one frame per t_j.
struct SpaceTimeField {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<FourierField> frames;
  std::optional<TimeWindow> window;

  int count() const { return static_cast<int>(frames.size()); }
  double span() const { return dt * count(); }
  int grid_radius() const { return frames.empty() ? 0 : frames.front().grid_radius(); }
  void validate() const;
};

// Sample a time-dependent field on a uniform grid.
SpaceTimeField sample_spacetime(double t0, double dt, int count,
                                const std::function<FourierField(double)>& u);

// Multiply every frame by eta_T(t_j) and attach the window descriptor.
SpaceTimeField apply_window(SpaceTimeField u, double T);

// Discrete X^{s,b} proxy norm: frames are periodized over the grid span,
// u~(n,tau_k) = dt * sum_j u(n,t_j) e^{-i tau_k t_j}, tau_k = 2 pi k / span,
// norm^2 = (1/span) * sum_{n,k} <n>^{2s} <tau_k+|n|^2>^{2b} |u~|^2.
// Throws if the Nyquist rate pi/dt does not exceed 8 * grid_radius^2.
double xsb_norm(const SpaceTimeField& u, const XsbParams& params);

// (integral of ||u(t)||_{L^p}^p dt over the grid, composite trapezoid)^{1/p}
double lp_spacetime_norm(const SpaceTimeField& u, double p);

// || e^{it Delta} P_N f ||_{L^4([0,1];L^4)} / || P_N f ||_{L^2}
double strichartz_ratio(const FourierField& f, int N);

// discrete eta_T transform on a grid: dt * sum_j eta_T(t_j) e^{-i lambda t_j}
cd eta_hat_disc(double T, double t0, double dt, int count, double lambda);

}  // namespace wick2d
