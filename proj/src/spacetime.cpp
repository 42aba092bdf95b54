#include "wick2d/spacetime.hpp"

#include <unsupported/Eigen/FFT>

#include "wick2d/fft2.hpp"

namespace wick2d {

void SpaceTimeField::validate() const {
  if (frames.size() < 2) throw std::invalid_argument("SpaceTimeField: need >= 2 frames");
  if (dt <= 0.0) throw std::invalid_argument("SpaceTimeField: dt must be positive");
  for (const auto& f : frames)
    if (f.grid_radius() != frames.front().grid_radius())
      throw std::invalid_argument("SpaceTimeField: mixed grid radii");
}

SpaceTimeField sample_spacetime(double t0, double dt, int count,
                                const std::function<FourierField(double)>& u) {
  SpaceTimeField st;
  st.t0 = t0;
  st.dt = dt;
  st.frames.reserve(count);
  for (int j = 0; j < count; ++j) st.frames.push_back(u(t0 + j * dt));
  st.validate();
  return st;
}

SpaceTimeField apply_window(SpaceTimeField u, double T) {
  u.validate();
  const TimeWindow w = TimeWindow::sampled(T, u.t0, u.dt, u.count());
  for (int j = 0; j < u.count(); ++j) u.frames[j] *= w.eta_samples[j];
  u.window = w;
  return u;
}

double xsb_norm(const SpaceTimeField& u, const XsbParams& params) {
  u.validate();
  const int R = u.grid_radius();
  const double nyquist = M_PI / u.dt;
  if (nyquist <= 8.0 * R * R)
    throw std::runtime_error(
        "xsb_norm: time grid too coarse to resolve modulation weights "
        "(need pi/dt > 8*R^2)");

  const int J = u.count();
  const double L = u.span();
  const auto& d = u.frames.front().disc();
  const int P = d.size();

  Eigen::FFT<double> fft;
  Eigen::VectorXcd series(J), spec(J);
  double acc = 0.0;
  for (int i = 0; i < P; ++i) {
    for (int j = 0; j < J; ++j) series[j] = u.frames[j].coeffs()[i];
    fft.fwd(spec, series);
    const double nn = static_cast<double>(norm2(d.point(i)));
    const double sw = std::pow(1.0 + nn, params.s);  // <n>^{2s}
    double inner = 0.0;
    for (int k = 0; k < J; ++k) {
      const int kk = (k <= J / 2) ? k : k - J;  // signed DFT index
      const double tau = 2.0 * M_PI * kk / L;
      const double mod = tau + nn;
      inner += std::pow(1.0 + mod * mod, params.b) * std::norm(spec[k]);
    }
    acc += sw * inner;
  }
  // |u~|^2 = dt^2 |fft|^2 and the tau-sum carries 1/L
  return std::sqrt(acc * u.dt * u.dt / L);
}

namespace {

double l4_norm4(const FourierField& f, int M) {
  const Eigen::MatrixXcd phys = to_physical(f, M);
  double acc = 0.0;
  for (int c = 0; c < phys.cols(); ++c)
    for (int r = 0; r < phys.rows(); ++r) {
      const double a2 = std::norm(phys(r, c));
      acc += a2 * a2;
    }
  return acc / (static_cast<double>(M) * M);
}

double lp_normp(const FourierField& f, double p, int M) {
  const Eigen::MatrixXcd phys = to_physical(f, M);
  double acc = 0.0;
  for (int c = 0; c < phys.cols(); ++c)
    for (int r = 0; r < phys.rows(); ++r)
      acc += std::pow(std::abs(phys(r, c)), p);
  return acc / (static_cast<double>(M) * M);
}

}  // namespace

double lp_spacetime_norm(const SpaceTimeField& u, double p) {
  u.validate();
  if (p < 1.0 || !std::isfinite(p))
    throw std::invalid_argument("lp_spacetime_norm: need finite p >= 1");
  const int R = u.grid_radius();
  // |u|^p integrand: p=2 resolved at 2R+1, p=4 at 4R+1; use the generic
  // oversampled grid (exact for even integer p <= 4, accurate otherwise)
  const int M = good_fft_size(4 * R + 2);
  double acc = 0.0;
  const int J = u.count();
  for (int j = 0; j < J; ++j) {
    const double w = (j == 0 || j == J - 1) ? 0.5 : 1.0;  // trapezoid
    acc += w * lp_normp(u.frames[j], p, M);
  }
  return std::pow(acc * u.dt, 1.0 / p);
}

double strichartz_ratio(const FourierField& f, int N) {
  const FourierField g = project(f, ProjMode::Leq, N);
  const double den = g.l2_norm();
  if (den == 0.0) throw std::invalid_argument("strichartz_ratio: P_N f vanishes");
  // restrict to the projected band so the FFT grid stays small
  FourierField pf(std::min(N, f.grid_radius()));
  for (int i = 0; i < pf.size(); ++i) pf.coeffs()[i] = g.at(pf.disc().point(i));

  const int R = pf.grid_radius();
  const int M = good_fft_size(4 * R + 2);
  // resolve the fastest beat (~4 R^2) in the t-quadrature
  const int J = std::max(64, 16 * R * R);
  const double dt = 1.0 / J;
  double acc = 0.0;
  for (int j = 0; j <= J; ++j) {
    const double w = (j == 0 || j == J) ? 0.5 : 1.0;
    acc += w * l4_norm4(linear_flow(pf, j * dt), M);
  }
  const double num = std::pow(acc * dt, 0.25);
  return num / den;
}

cd eta_hat_disc(double T, double t0, double dt, int count, double lambda) {
  cd acc(0.0, 0.0);
  for (int j = 0; j < count; ++j) {
    const double t = t0 + j * dt;
    const double e = eta_T(t, T);
    if (e != 0.0) acc += e * cd(std::cos(lambda * t), -std::sin(lambda * t));
  }
  return acc * dt;
}

}  // namespace wick2d
