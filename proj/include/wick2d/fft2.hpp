#pragma once

#include <unsupported/Eigen/FFT>

#include "wick2d/field.hpp"

namespace wick2d {

// smallest M >= lo whose prime factors are all in {2,3,5}
inline int good_fft_size(int lo) {
  for (int m = std::max(lo, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

// In-place 2D DFTs, convention:
//   fwd:  X(k) = sum_j x(j) e^{-2pi i j.k/M}
//   inv:  x(j) = (1/M^2) sum_k X(k) e^{+2pi i j.k/M}
inline void fft2_fwd(Eigen::MatrixXcd& a) {
  Eigen::FFT<double> fft;
  const int M = static_cast<int>(a.rows());
  Eigen::VectorXcd in(M), out(M);
  for (int c = 0; c < M; ++c) {
    in = a.col(c);
    fft.fwd(out, in);
    a.col(c) = out;
  }
  for (int r = 0; r < M; ++r) {
    in = a.row(r).transpose();
    fft.fwd(out, in);
    a.row(r) = out.transpose();
  }
}

inline void fft2_inv(Eigen::MatrixXcd& a) {
  Eigen::FFT<double> fft;
  const int M = static_cast<int>(a.rows());
  Eigen::VectorXcd in(M), out(M);
  for (int c = 0; c < M; ++c) {
    in = a.col(c);
    fft.inv(out, in);
    a.col(c) = out;
  }
  for (int r = 0; r < M; ++r) {
    in = a.row(r).transpose();
    fft.inv(out, in);
    a.row(r) = out.transpose();
  }
}

// Samples u(x_{jk}) on the uniform M x M grid, x_j = 2pi j / M.
// Exact for any M > 2*grid_radius (no wrap-around collisions).
inline Eigen::MatrixXcd to_physical(const FourierField& f, int M) {
  if (M <= 2 * f.grid_radius())
    throw std::invalid_argument("to_physical: grid too small for the band");
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(M, M);
  const auto& d = f.disc();
  for (int i = 0; i < f.size(); ++i) {
    const Vec2i& n = d.point(i);
    const int jx = ((n.x() % M) + M) % M;
    const int jy = ((n.y() % M) + M) % M;
    g(jx, jy) += f.coeffs()[i];
  }
  fft2_inv(g);
  g *= static_cast<double>(M) * M;
  return g;
}

// Recovers coefficients on |n| <= radius from physical samples; exact when
// the samples come from a field bandlimited to |n|_inf < M - radius.
inline FourierField from_physical(const Eigen::MatrixXcd& u, int radius) {
  const int M = static_cast<int>(u.rows());
  Eigen::MatrixXcd g = u;
  fft2_fwd(g);
  g /= static_cast<double>(M) * M;
  FourierField f(radius);
  const auto& d = f.disc();
  for (int i = 0; i < f.size(); ++i) {
    const Vec2i& n = d.point(i);
    const int jx = ((n.x() % M) + M) % M;
    const int jy = ((n.y() % M) + M) % M;
    f.coeffs()[i] = g(jx, jy);
  }
  return f;
}

// integral over T^2 with the normalized measure = grid mean (exact for
// bandlimited integrands resolved by the grid)
inline cd grid_integral(const Eigen::MatrixXcd& u) { return u.mean(); }

}  // namespace wick2d
