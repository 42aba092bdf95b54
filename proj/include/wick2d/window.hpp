#pragma once

#include <cmath>
#include <vector>

namespace wick2d {

// Smooth bump: 1 on [-1,1], supported in [-2,2], C^infty.
inline double eta_bump(double t) {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double s = a - 1.0;  // in (0,1)
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

inline double eta_T(double t, double T) { return eta_bump(t / T); }

struct TimeWindow {
  double T = 1.0;
  std::vector<double> eta_samples;  // eta_T on the owning time grid

  static TimeWindow sampled(double T, double t0, double dt, int count) {
    TimeWindow w;
    w.T = T;
    w.eta_samples.resize(count);
    for (int j = 0; j < count; ++j) w.eta_samples[j] = eta_T(t0 + j * dt, T);
    return w;
  }
};

}  // namespace wick2d
