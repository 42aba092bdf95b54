#include "wick2d/dynamics.hpp"

#include <cmath>
#include <numeric>

#include "wick2d/rng.hpp"
#include "wick2d/stats.hpp"
#include "wick2d/trilinear.hpp"

namespace wick2d {

namespace {

// band-restricted copy (radius N) of the low modes of u
FourierField low_band(const FourierField& u, int N) {
  FourierField v(N);
  const auto& d = v.disc();
  for (int i = 0; i < v.size(); ++i) v.coeffs()[i] = u.at(d.point(i));
  return v;
}

// forcing constant per mode; sig = sigma_N
double forcing_constant(NlsMode mode, const FourierField& band, double sig) {
  switch (mode) {
    case NlsMode::Ungauged: return 2.0 * sig;
    case NlsMode::Gauged: return 2.0 * band.l2_norm_sq();
    case NlsMode::Bare: return 0.0;
  }
  return 0.0;
}

}  // namespace

FourierField rhs(const NlsState& state, NlsMode mode) {
  const int N = state.truncation_N;
  if (N > state.field.grid_radius())
    throw std::invalid_argument("rhs: truncation exceeds grid radius");
  const FourierField band = low_band(state.field, N);
  const double c = forcing_constant(mode, band, sigma(N).sigma_N);
  FourierField cub = cubic_conv(band, band, band);  // exact on |n| <= N
  cub.coeffs() -= c * band.coeffs();
  FourierField out(state.field.grid_radius());
  const auto& bd = cub.disc();
  for (int i = 0; i < cub.size(); ++i) {
    const int j = out.disc().find(bd.point(i));
    out.coeffs()[j] = cd(0.0, -1.0) * cub.coeffs()[i];
  }
  return out;
}

double alpha_constant(const NlsState& state0) {
  const FourierField band = low_band(state0.field, state0.truncation_N);
  return band.l2_norm_sq() - sigma(state0.truncation_N).sigma_N;
}

FourierField gauge_transform(const FourierField& u, double t, double alpha, int N) {
  FourierField out = u;
  const cd ph(std::cos(2.0 * t * alpha), std::sin(2.0 * t * alpha));
  const auto& d = u.disc();
  const long r2 = static_cast<long>(N) * N;
  for (int i = 0; i < u.size(); ++i)
    if (norm2(d.point(i)) <= r2) out.coeffs()[i] *= ph;
  return out;
}

double mass_observable(const FourierField& u) { return u.l2_norm_sq(); }

double wick_energy(const FourierField& u, int N) {
  return 0.5 * u.h1dot_sq() + 0.25 * wick_quartic(u, N).integrated;
}

namespace {

// interaction-picture RK4 stepper on the low band (radius N); high modes of
// the full field evolve by exact phases only, so they are carried separately.
class Stepper {
 public:
  Stepper(int N, double dt, NlsMode mode, const std::string& scheme = "ip-rk4")
      : N_(N), dt_(dt), mode_(mode), sig_(sigma(N).sigma_N),
        extrapolate_(scheme == "ip-rk4x5") {
    if (scheme != "ip-rk4" && scheme != "ip-rk4x5")
      throw std::invalid_argument("evolve: unknown scheme " + scheme);
    const auto& d = *DiscIndex::get(N);
    q_.resize(d.size());
    for (int i = 0; i < d.size(); ++i)
      q_[i] = static_cast<double>(norm2(d.point(i)));
  }

  // one step of the band ODE i v_t + Delta v = P_N{(|v|^2 - c) v}
  void step(FourierField& v) const {
    const double m_in = v.coeffs().squaredNorm();
    const double e_in = band_energy(v.coeffs());
    if (!extrapolate_) {
      v.coeffs() = rk4(v.coeffs(), dt_);
    } else {
      // local Richardson extrapolation: 5th-order one-step combination
      const Eigen::VectorXcd whole = rk4(v.coeffs(), dt_);
      const Eigen::VectorXcd halves = rk4(rk4(v.coeffs(), 0.5 * dt_), 0.5 * dt_);
      v.coeffs() = (16.0 * halves - whole) / 15.0;
    }
    // the flow conserves mass and Wick energy exactly in every mode; project
    // the step back onto both invariant manifolds (mass rescale + Newton
    // correction along the energy gradient, kept tangent to the mass sphere)
    v.coeffs() *= std::sqrt(m_in / v.coeffs().squaredNorm());
    for (int it = 0; it < 3; ++it) {
      const double de = e_in - band_energy(v.coeffs());
      if (std::abs(de) <= 1e-13 * std::max(1.0, std::abs(e_in))) break;
      const Eigen::VectorXcd g = energy_grad(v);
      Eigen::VectorXcd d = g;
      d -= (v.coeffs().dot(g).real() / m_in) * v.coeffs();
      const double slope = d.dot(g).real();
      if (!(std::abs(slope) > 1e-14 * std::max(1.0, g.squaredNorm()))) break;
      v.coeffs() += (de / slope) * d;
      v.coeffs() *= std::sqrt(m_in / v.coeffs().squaredNorm());
    }
  }

 private:
  // interaction-picture RK4 over one step of size h
  Eigen::VectorXcd rk4(const Eigen::VectorXcd& v0, double h) const {
    FourierField tmp(N_);
    tmp.coeffs() = v0;
    const Eigen::VectorXcd k1 = nl(tmp);

    tmp.coeffs() = flow(v0 + 0.5 * h * k1, 0.5 * h);
    const Eigen::VectorXcd k2 = flow(nl(tmp), -0.5 * h);

    tmp.coeffs() = flow(v0 + 0.5 * h * k2, 0.5 * h);
    const Eigen::VectorXcd k3 = flow(nl(tmp), -0.5 * h);

    tmp.coeffs() = flow(v0 + h * k3, h);
    const Eigen::VectorXcd k4 = flow(nl(tmp), -h);

    return flow(v0 + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), h);
  }

  // Wick energy of the band: 1/2 |v|_{H^1dot}^2 + 1/4 int :|v|^4:
  double band_energy(const Eigen::VectorXcd& x) const {
    FourierField v(N_);
    v.coeffs() = x;
    double h1 = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) h1 += q_[i] * std::norm(x[i]);
    return 0.5 * h1 + 0.25 * wick_quartic(v, N_).integrated;
  }

  // dE = Re <grad, dv> for the Wick energy above
  Eigen::VectorXcd energy_grad(const FourierField& v) const {
    FourierField cub = cubic_conv(v, v, v);
    Eigen::VectorXcd g = cub.coeffs() - 2.0 * sig_ * v.coeffs();
    for (Eigen::Index i = 0; i < g.size(); ++i) g[i] += q_[i] * v.coeffs()[i];
    return g;
  }

  Eigen::VectorXcd nl(const FourierField& v) const {
    const double c = forcing_constant(mode_, v, sig_);
    FourierField cub = cubic_conv(v, v, v);
    return cd(0.0, -1.0) * (cub.coeffs() - c * v.coeffs());
  }

  // e^{it Delta} on the band: coefficient n picks up e^{-it|n|^2}
  Eigen::VectorXcd flow(const Eigen::VectorXcd& x, double t) const {
    Eigen::VectorXcd y(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      y[i] = std::polar(1.0, -t * q_[i]) * x[i];
    return y;
  }

  int N_;
  double dt_;
  NlsMode mode_;
  double sig_;
  bool extrapolate_;
  std::vector<double> q_;
};

void validate_config(const IntegratorConfig& config, int N) {
  if (config.dt <= 0.0) throw std::invalid_argument("evolve: dt must be positive");
  // soft guideline dt*(2N)^2 <= 0.5; hard cap with slack for pinned sweeps
  if (config.dt * 4.0 * N * N > 2.05)
    throw std::invalid_argument("evolve: dt too large for the fastest retained beat");
}

}  // namespace

TrajectoryRecord evolve(const NlsState& state, double t_end,
                        const IntegratorConfig& config, NlsMode mode) {
  const int N = state.truncation_N;
  validate_config(config, N);
  const double span = t_end - state.time;
  const double dir = span >= 0.0 ? 1.0 : -1.0;
  const int steps = static_cast<int>(std::llround(std::abs(span) / config.dt));
  if (std::abs(steps * config.dt - std::abs(span)) > 1e-9 * std::max(1.0, std::abs(span)))
    throw std::invalid_argument("evolve: span must be an integer number of steps");

  const Stepper stepper(N, dir * config.dt, mode, config.scheme);
  FourierField band = low_band(state.field, N);

  TrajectoryRecord rec;
  const int R = state.field.grid_radius();
  const auto& fd = *DiscIndex::get(R);
  const long r2 = static_cast<long>(N) * N;

  // assemble the full field at band state + linearly evolved high modes
  auto assemble = [&](const FourierField& b, double t) {
    FourierField u(R);
    for (int i = 0; i < fd.size(); ++i) {
      const Vec2i& n = fd.point(i);
      if (norm2(n) <= r2) {
        u.coeffs()[i] = b.at(n);
      } else {
        const double ph = -(t - state.time) * static_cast<double>(norm2(n));
        u.coeffs()[i] = state.field.coeffs()[i] * std::polar(1.0, ph);
      }
    }
    return u;
  };

  double e0 = 0.0;
  bool have_e0 = false;
  auto record = [&](double t, const FourierField& b) {
    const FourierField u = assemble(b, t);
    rec.times.push_back(t);
    rec.mass.push_back(mass_observable(u));
    const double e = wick_energy(u, N);
    rec.energy.push_back(e);
    if (!have_e0) {
      e0 = e;
      have_e0 = true;
    } else if (config.tolerance > 0.0) {
      const double elapsed = std::abs(t - state.time);
      if (elapsed > 0.0) {
        const double drift = std::abs(e - e0) / std::max(1.0, std::abs(e0)) / elapsed;
        if (drift > config.tolerance)
          throw std::runtime_error("evolve: energy drift per unit time exceeds tolerance");
      }
    }
  };

  record(state.time, band);
  for (int k = 1; k <= steps; ++k) {
    stepper.step(band);
    const double t = state.time + dir * k * config.dt;
    if (config.record_stride > 0 && (k % config.record_stride == 0 || k == steps))
      record(t, band);
    else if (config.record_stride == 0 && k == steps)
      record(t, band);
  }

  rec.final_state = {assemble(band, t_end), t_end, N};
  return rec;
}

double gauge_equivalence_check(const FourierField& u0, int N, double t_end,
                               const IntegratorConfig& config) {
  validate_config(config, N);
  const NlsState s0{u0, 0.0, N};
  const double alpha = alpha_constant(s0);
  const int steps = static_cast<int>(std::llround(std::abs(t_end) / config.dt));
  const double dir = t_end >= 0.0 ? 1.0 : -1.0;

  const Stepper sa(N, dir * config.dt, NlsMode::Ungauged, config.scheme);
  const Stepper sb(N, dir * config.dt, NlsMode::Gauged, config.scheme);
  FourierField a = low_band(u0, N);
  FourierField b = low_band(u0, N);

  // high modes agree exactly between the paths (identical linear evolution),
  // so the discrepancy lives on the band
  double sup = 0.0;
  for (int k = 1; k <= steps; ++k) {
    sa.step(a);
    sb.step(b);
    const double t = dir * k * config.dt;
    const FourierField ga = gauge_transform(a, t, alpha, N);
    sup = std::max(sup, (ga - b).l2_norm());
  }
  return sup;
}

ResidualCurve residual_diagnostic(const FourierField& u0, int N, double t_end,
                                  const IntegratorConfig& config, double s) {
  validate_config(config, N);
  const int steps = static_cast<int>(std::llround(std::abs(t_end) / config.dt));
  const double dir = t_end >= 0.0 ? 1.0 : -1.0;
  const Stepper st(N, dir * config.dt, NlsMode::Gauged, config.scheme);
  FourierField v = low_band(u0, N);
  const FourierField z0 = low_band(u0, N);

  // w = v - z is supported on the band: high modes of v and z coincide
  ResidualCurve curve;
  curve.times.push_back(0.0);
  curve.hs_norms.push_back(0.0);
  const int stride = std::max(1, config.record_stride);
  for (int k = 1; k <= steps; ++k) {
    st.step(v);
    if (k % stride == 0 || k == steps) {
      const double t = dir * k * config.dt;
      const FourierField w = v - linear_flow(z0, t);
      curve.times.push_back(t);
      curve.hs_norms.push_back(w.hs_norm(s));
    }
  }
  return curve;
}

InvarianceReport invariance_test(int N, double t_end, int n_samples,
                                 std::uint64_t seed, const IntegratorConfig& config,
                                 bool control, double ess_floor_frac) {
  validate_config(config, N);
  const int steps = static_cast<int>(std::llround(t_end / config.dt));
  const Stepper st(N, config.dt, control ? NlsMode::Bare : NlsMode::Gauged, config.scheme);
  const Vec2i mode_pt(1, 0);

  const int n_obs = 3;
  const char* names[n_obs] = {"mass", "wick_quartic", "re_mode_1_0"};
  std::vector<std::vector<double>> d(n_obs);  // per-sample O(t_end) - O(0)
  std::vector<std::vector<double>> o0(n_obs);
  std::vector<std::vector<double>> oT(n_obs);
  std::vector<double> logw(n_samples, 0.0);

  for (int i = 0; i < n_samples; ++i) {
    const GaussianEnsemble ens(rng::derive_seed(seed, static_cast<std::uint64_t>(i)), N);
    FourierField u = sample_mu(N, ens);
    // Importance weight = density of the invariant measure relative to mu.
    // Liouville: the flow preserves exp(-H) d(Leb) for the conserved
    // H = sum <n>^2 |u_n|^2 + 1/2 int |u|^4 - c ||u||^2, and mu has density
    // exp(-sum <n>^2 |u_n|^2) under the E|u_n|^2 = <n>^{-2} normalization,
    // leaving exp(-1/2 int :|u|^4:) as the quartic factor (twice the
    // exp(-1/4 ...) weight, which belongs to the E|g_n|^2 = 2 convention).
    if (!control) logw[i] = 2.0 * gibbs_log_weight(u, N);

    const double m0 = mass_observable(u);
    const double q0 = wick_quartic(u, N).integrated;
    const double r0 = u.at(mode_pt).real();
    for (int k = 0; k < steps; ++k) st.step(u);
    const double mT = mass_observable(u);
    const double qT = wick_quartic(u, N).integrated;
    const double rT = u.at(mode_pt).real();

    const double v0[n_obs] = {m0, q0, r0};
    const double vT[n_obs] = {mT, qT, rT};
    for (int j = 0; j < n_obs; ++j) {
      o0[j].push_back(v0[j]);
      oT[j].push_back(vT[j]);
      d[j].push_back(vT[j] - v0[j]);
    }
  }

  InvarianceReport rep;
  rep.n_samples = n_samples;
  rep.control = control;
  rep.ess = effective_sample_size(logw);
  rep.inconclusive = rep.ess < ess_floor_frac * n_samples;

  std::vector<double> w(n_samples);
  const double mx = *std::max_element(logw.begin(), logw.end());
  for (int i = 0; i < n_samples; ++i) w[i] = std::exp(logw[i] - mx);

  for (int j = 0; j < n_obs; ++j) {
    ObservableReport orp;
    orp.name = names[j];
    orp.mean_diff = stats::weighted_mean(d[j], w);
    orp.se = stats::bootstrap_se_weighted_mean(d[j], w, 1000,
                                               rng::derive_seed(seed, 0x77AA0000ULL + j));
    // paired drift at roundoff level (e.g. exactly conserved observables)
    // carries no distributional signal; report z = 0 rather than noise/noise
    double sd0 = 0.0;
    const double mu0j = stats::weighted_mean(o0[j], w);
    for (int i = 0; i < n_samples; ++i)
      sd0 += w[i] * (o0[j][i] - mu0j) * (o0[j][i] - mu0j);
    sd0 = std::sqrt(sd0 / std::max(1e-300, std::accumulate(w.begin(), w.end(), 0.0)));
    const double floor = 1e-10 * std::max(1.0, sd0);
    orp.mean_z = (orp.se > 0.0 && std::abs(orp.mean_diff) > floor)
                     ? orp.mean_diff / orp.se : 0.0;

    // variance comparison via the weighted second central moment difference
    std::vector<double> dv(n_samples);
    const double mu0 = stats::weighted_mean(o0[j], w);
    const double muT = stats::weighted_mean(oT[j], w);
    for (int i = 0; i < n_samples; ++i)
      dv[i] = (oT[j][i] - muT) * (oT[j][i] - muT) - (o0[j][i] - mu0) * (o0[j][i] - mu0);
    const double mdv = stats::weighted_mean(dv, w);
    const double sedv = stats::bootstrap_se_weighted_mean(
        dv, w, 1000, rng::derive_seed(seed, 0x77BB0000ULL + j));
    const double floor_var = 1e-10 * std::max(1.0, sd0 * sd0);
    orp.var_z = (sedv > 0.0 && std::abs(mdv) > floor_var) ? mdv / sedv : 0.0;
    rep.observables.push_back(orp);
  }
  return rep;
}

}  // namespace wick2d
