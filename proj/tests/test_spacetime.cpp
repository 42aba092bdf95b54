// Space-time grids, the discrete X^{s,b} proxy norm, Lp norms, and the
// Strichartz ratio.
#include <doctest.h>

#include <cmath>

#include "wick2d/spacetime.hpp"

using namespace wick2d;

namespace {

// windowed single-mode field u(n0, t) = eta_T(t) e^{-i mu t} on a grid whose
// origin is a sample point (t0 = -J/2 * dt)
SpaceTimeField single_mode(const Vec2i& n0, double mu, double T, double dt, int J) {
  const double t0 = -0.5 * J * dt;
  SpaceTimeField u = sample_spacetime(t0, dt, J, [&](double t) {
    FourierField f(std::max(std::abs(n0.x()), std::abs(n0.y())) + 1);
    f.set(n0, std::exp(cd(0.0, -mu * t)));
    return f;
  });
  return apply_window(std::move(u), T);
}

}  // namespace

TEST_CASE("xsb_norm is homogeneous and positive") {
  SpaceTimeField u = single_mode(Vec2i(1, 1), 2.0, 0.25, 0.02, 64);
  const XsbParams p{0.1, -0.48, 0.01};
  const double n1 = xsb_norm(u, p);
  CHECK(n1 > 0.0);
  for (auto& f : u.frames) f *= cd(0.0, -3.0);  // scale by a modulus-3 constant
  CHECK(xsb_norm(u, p) == doctest::Approx(3.0 * n1).epsilon(1e-12));
}

TEST_CASE("xsb_norm spatial weight is <n>^{2s} in the squared norm") {
  // for a single-mode field the spatial weight factors out of the norm, so
  // changing s alone rescales the norm by exactly <n0>^{s} = (1+q)^{s/2}
  const double T = 0.25, dt = 0.02;
  const int J = 64;
  const Vec2i n0(1, 1);
  const double q = static_cast<double>(norm2(n0));
  const SpaceTimeField a = single_mode(n0, 1.0, T, dt, J);
  const double s1 = 0.3;
  const double ratio = xsb_norm(a, XsbParams{s1, -0.48, 0.01}) /
                       xsb_norm(a, XsbParams{0.0, -0.48, 0.01});
  CHECK(ratio == doctest::Approx(std::pow(1.0 + q, s1 / 2.0)).epsilon(1e-12));
}

TEST_CASE("xsb_norm matches an eta_hat_disc reference for a single mode") {
  const double T = 0.25, dt = 0.02;
  const int J = 64;
  const double t0 = -0.5 * J * dt, L = dt * J;
  const Vec2i n0(2, 0);
  const double mu = 1.5;
  const SpaceTimeField u = single_mode(n0, mu, T, dt, J);
  const XsbParams p{0.1, -0.48, 0.01};
  const double q = static_cast<double>(norm2(n0));
  double acc = 0.0;
  for (int k = 0; k < J; ++k) {
    const int kk = (k <= J / 2) ? k : k - J;
    const double tau = 2.0 * M_PI * kk / L;
    const double mod = tau + q;
    acc += std::pow(1.0 + q, p.s) * std::pow(1.0 + mod * mod, p.b) *
           std::norm(eta_hat_disc(T, t0, dt, J, tau + mu));
  }
  CHECK(xsb_norm(u, p) == doctest::Approx(std::sqrt(acc / L)).epsilon(1e-10));
}

TEST_CASE("xsb_norm rejects grids that cannot resolve the modulation") {
  // radius 2 needs pi/dt > 32
  SpaceTimeField u = single_mode(Vec2i(2, 0), 0.0, 0.25, 0.2, 16);
  CHECK_THROWS(xsb_norm(u, XsbParams{0.0, -0.5, 0.01}));
}

TEST_CASE("lp_spacetime_norm of a constant unit field") {
  const double dt = 0.05;
  const int J = 40;
  const SpaceTimeField u = sample_spacetime(0.0, dt, J, [](double) {
    FourierField f(1);
    f.set(Vec2i(0, 0), cd(1.0, 0.0));
    return f;
  });
  // composite trapezoid halves the endpoint weights: integral = dt * (J - 1)
  const double span = dt * (J - 1);
  CHECK(lp_spacetime_norm(u, 2.0) == doctest::Approx(std::sqrt(span)).epsilon(1e-12));
  CHECK(lp_spacetime_norm(u, 4.0) ==
        doctest::Approx(std::pow(span, 0.25)).epsilon(1e-12));
}

TEST_CASE("strichartz_ratio of the zero mode is 1") {
  FourierField f(1);
  f.set(Vec2i(0, 0), cd(2.0, 0.0));
  CHECK(strichartz_ratio(f, 1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("eta_hat_disc conjugate symmetry and zero-frequency mass") {
  const double T = 0.5, dt = 0.01;
  const int J = 512;
  const double t0 = -0.5 * J * dt;
  const cd a = eta_hat_disc(T, t0, dt, J, 3.0);
  const cd b = eta_hat_disc(T, t0, dt, J, -3.0);
  CHECK(std::abs(a - std::conj(b)) < 1e-12);
  const cd mass = eta_hat_disc(T, t0, dt, J, 0.0);
  CHECK(mass.imag() == doctest::Approx(0.0).epsilon(1e-12));
  // integral of eta_T lies between the plateau 2T and the support 4T
  CHECK(mass.real() > 2.0 * T);
  CHECK(mass.real() < 4.0 * T);
}
