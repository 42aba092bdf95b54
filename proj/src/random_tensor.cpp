#include "wick2d/random_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "wick2d/spacetime.hpp"
#include "wick2d/stats.hpp"
#include "wick2d/trilinear.hpp"
#include "wick2d/window.hpp"

namespace wick2d {

std::string kernel_variant_name(KernelVariant v) {
  switch (v) {
    case KernelVariant::Generic: return "generic";
    case KernelVariant::H1: return "h1";
    case KernelVariant::H2: return "h2";
    case KernelVariant::H3: return "h3";
    case KernelVariant::H4: return "h4";
  }
  return "?";
}

KernelVariant parse_kernel_variant(const std::string& name) {
  if (name == "generic") return KernelVariant::Generic;
  if (name == "h1") return KernelVariant::H1;
  if (name == "h2") return KernelVariant::H2;
  if (name == "h3") return KernelVariant::H3;
  if (name == "h4") return KernelVariant::H4;
  throw std::invalid_argument("unknown kernel variant " + name);
}

namespace {

// one matrix entry contribution with its frozen deterministic weight and
// up to two Gaussian slots (point id in the ensemble disc, conjugation flag)
struct PlanEntry {
  int row = 0, col = 0;
  int slot[2] = {-1, -1};
  bool conj[2] = {false, false};
  double w = 1.0;
};

struct KernelPlan {
  std::vector<TensorKey> rows, cols;
  std::vector<PlanEntry> entries;
  int ensemble_radius = 1;
  int n_slots = 0;
};

KernelPlan make_plan(const RandomKernelSpec& spec, int cap) {
  KernelPlan plan;
  plan.ensemble_radius = std::max({spec.tuple.N1, spec.tuple.N2, spec.tuple.N3});
  const auto disc = DiscIndex::get(plan.ensemble_radius);
  const auto quads = enumerate_S(spec.tuple, spec.m, cap);

  std::map<TensorKey, int, TensorKeyLess> rid, cid;
  struct Raw {
    TensorKey rkey, ckey;
    Vec2i gpts[2];
    bool gconj[2] = {false, false};
    int ns = 0;
    double w = 1.0;
  };
  std::vector<Raw> raws;
  const double s = spec.s;
  for (const Quad& q : quads) {
    const Vec2i &n = q[0], &n1 = q[1], &n2 = q[2], &n3 = q[3];
    Raw r;
    r.rkey = {n};
    switch (spec.variant) {
      case KernelVariant::Generic:
        r.ckey = {n2};
        r.gpts[0] = n1;
        r.gpts[1] = n3;
        r.ns = 2;
        r.w = 1.0;  // unweighted base tensor
        break;
      case KernelVariant::H1:
        r.ckey = {n2};
        r.gpts[0] = n1;
        r.gpts[1] = n3;
        r.ns = 2;
        if (spec.weights)
          r.w = std::pow(jb(n), s) / std::pow(jb(n2), s) / (jb(n1) * jb(n3));
        break;
      case KernelVariant::H2:
        r.ckey = {n1};
        r.gpts[0] = n2;
        r.gconj[0] = true;
        r.gpts[1] = n3;
        r.ns = 2;
        if (spec.weights)
          r.w = std::pow(jb(n), s) / std::pow(jb(n1), s) / (jb(n2) * jb(n3));
        break;
      case KernelVariant::H3:
        r.ckey = {n2, n3};
        r.gpts[0] = n1;
        r.ns = 1;
        if (spec.weights)
          r.w = std::pow(jb(n), s) / (std::pow(jb(n2), s) * std::pow(jb(n3), s)) / jb(n1);
        break;
      case KernelVariant::H4:
        r.ckey = {n1, n3};
        r.gpts[0] = n2;
        r.gconj[0] = true;
        r.ns = 1;
        if (spec.weights)
          r.w = std::pow(jb(n), s) / (std::pow(jb(n1), s) * std::pow(jb(n3), s)) / jb(n2);
        break;
    }
    rid.emplace(r.rkey, 0);
    cid.emplace(r.ckey, 0);
    raws.push_back(std::move(r));
  }
  int r = 0, c = 0;
  for (auto& [k, id] : rid) {
    id = r++;
    plan.rows.push_back(k);
  }
  for (auto& [k, id] : cid) {
    id = c++;
    plan.cols.push_back(k);
  }
  for (const Raw& raw : raws) {
    PlanEntry e;
    e.row = rid.at(raw.rkey);
    e.col = cid.at(raw.ckey);
    e.w = raw.w;
    for (int i = 0; i < raw.ns; ++i) {
      e.slot[i] = disc->find(raw.gpts[i]);
      e.conj[i] = raw.gconj[i];
    }
    plan.entries.push_back(e);
    plan.n_slots = std::max(plan.n_slots, raw.ns);
  }
  return plan;
}

inline cd entry_value(const PlanEntry& e, const GaussianEnsemble& ens) {
  cd v(e.w, 0.0);
  for (int i = 0; i < 2 && e.slot[i] >= 0; ++i) {
    const cd g = ens.g(e.slot[i]);
    v *= e.conj[i] ? std::conj(g) : g;
  }
  return v;
}

std::vector<Triplet> sample_triplets(const KernelPlan& plan,
                                     const GaussianEnsemble& ens) {
  std::vector<Triplet> t;
  t.reserve(plan.entries.size());
  for (const PlanEntry& e : plan.entries)
    t.push_back({e.row, e.col, entry_value(e, ens)});
  return t;
}

// Wick-ordered :g^a conj(g)^b: for a standard complex Gaussian, a + b <= 3
cd wick_power(cd g, int a, int b) {
  if (a < b) return std::conj(wick_power(g, b, a));
  const cd gb = std::conj(g);
  if (b == 0) {
    if (a == 0) return 1.0;
    if (a == 1) return g;
    if (a == 2) return g * g;
    if (a == 3) return g * g * g;
  }
  if (b == 1) {
    if (a == 1) return g * gb - 1.0;
    if (a == 2) return g * g * gb - 2.0 * g;
  }
  throw std::invalid_argument("wick_power: order above 3 not supported");
}

}  // namespace

SparseTensor build_generic_random_tensor(const SparseTensor& h,
                                         const std::vector<std::string>& gaussian_axes,
                                         const GaussianEnsemble& ensemble) {
  std::vector<int> gidx;
  for (const auto& a : gaussian_axes) gidx.push_back(h.axis_index(a));
  std::vector<bool> conj_axis;
  for (const auto& a : gaussian_axes) conj_axis.push_back(a == "n2");
  std::vector<int> keep;
  std::vector<std::string> out_axes;
  for (std::size_t i = 0; i < h.axes().size(); ++i) {
    if (std::find(gidx.begin(), gidx.end(), static_cast<int>(i)) == gidx.end()) {
      keep.push_back(static_cast<int>(i));
      out_axes.push_back(h.axes()[i]);
    }
  }
  std::map<TensorKey, cd, TensorKeyLess> acc;
  for (const auto& [key, val] : h.entries()) {
    // multiplicities per point: (unconjugated, conjugated) copies
    std::map<TensorKey, std::pair<int, int>, TensorKeyLess> mult;
    for (std::size_t i = 0; i < gidx.size(); ++i) {
      auto& ab = mult[{key[gidx[i]]}];
      (conj_axis[i] ? ab.second : ab.first)++;
    }
    cd prod = val;
    for (const auto& [pt, ab] : mult)
      prod *= wick_power(ensemble.g(pt[0]), ab.first, ab.second);
    TensorKey out;
    for (int i : keep) out.push_back(key[i]);
    acc[out] += prod;
  }
  SparseTensor out(out_axes);
  for (const auto& [k, v] : acc) out.set(k, v);
  return out;
}

KernelMatrix build_kernel(const RandomKernelSpec& spec,
                          const GaussianEnsemble& ensemble, int cap) {
  const KernelPlan plan = make_plan(spec, cap);
  if (ensemble.grid_radius() < plan.ensemble_radius)
    throw std::invalid_argument("build_kernel: ensemble radius too small");
  // re-resolve slot ids against the supplied ensemble's disc
  const auto disc = DiscIndex::get(plan.ensemble_radius);
  KernelMatrix km;
  km.rows = plan.rows;
  km.cols = plan.cols;
  km.M = Eigen::MatrixXcd::Zero(static_cast<int>(plan.rows.size()),
                                static_cast<int>(plan.cols.size()));
  for (const PlanEntry& e : plan.entries) {
    cd v(e.w, 0.0);
    for (int i = 0; i < 2 && e.slot[i] >= 0; ++i) {
      const cd g = ensemble.g(disc->point(e.slot[i]));
      v *= e.conj[i] ? std::conj(g) : g;
    }
    km.M(e.row, e.col) += v;
  }
  return km;
}

double sigma_max_dense(const Eigen::MatrixXcd& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0.0;
  if (std::max(M.rows(), M.cols()) <= 96)
    return Eigen::BDCSVD<Eigen::MatrixXcd>(M).singularValues()(0);
  std::vector<Triplet> t;
  for (int j = 0; j < M.cols(); ++j)
    for (int i = 0; i < M.rows(); ++i)
      if (M(i, j) != cd(0.0, 0.0))
        t.push_back({i, j, M(i, j)});
  return sigma_max_lanczos(t, static_cast<int>(M.rows()), static_cast<int>(M.cols()));
}

namespace {

std::vector<double> mc_norm_samples(const KernelPlan& plan, int n_samples,
                                    std::uint64_t seed) {
  std::vector<double> norms;
  norms.reserve(n_samples);
  const int rows = static_cast<int>(plan.rows.size());
  const int cols = static_cast<int>(plan.cols.size());
  for (int i = 0; i < n_samples; ++i) {
    const GaussianEnsemble ens(rng::derive_seed(seed, i), plan.ensemble_radius);
    norms.push_back(sigma_max_lanczos(sample_triplets(plan, ens), rows, cols, 1e-8));
  }
  return norms;
}

double lp_mean(const std::vector<double>& x, double p) {
  double acc = 0.0;
  for (double v : x) acc += std::pow(v, p);
  return std::pow(acc / static_cast<double>(x.size()), 1.0 / p);
}

NormEstimate estimate_from(const std::vector<double>& norms, double p,
                           std::uint64_t seed) {
  NormEstimate est;
  est.p = p;
  est.n_samples = static_cast<int>(norms.size());
  est.estimate = lp_mean(norms, p);
  const auto ci = stats::bootstrap_ci(
      norms, [p](const std::vector<double>& v) { return lp_mean(v, p); }, 1000,
      rng::derive_seed(seed, 0xC1));
  est.ci_lo = ci.lo;
  est.ci_hi = ci.hi;
  return est;
}

}  // namespace

NormEstimate mc_operator_norm(const RandomKernelSpec& spec, double p,
                              int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("mc_operator_norm: need samples");
  const KernelPlan plan = make_plan(spec, 16);
  return estimate_from(mc_norm_samples(plan, n_samples, seed), p, seed);
}

RtScalingReport verify_rt_scaling(KernelVariant variant,
                                  const std::vector<int>& sizes, double p,
                                  double slope_cap, int n_samples, double s,
                                  std::uint64_t seed) {
  RtScalingReport rep;
  rep.variant = variant;
  rep.p = p;
  rep.s = s;
  rep.slope_cap = slope_cap;
  const double eps = rep.eps;

  std::vector<double> xs, ys;
  for (int sz : sizes) {
    RandomKernelSpec spec;
    spec.variant = variant;
    // H3/H4 lemmas require the swept block to dominate (N1 resp. N2 = N_max);
    // the other sweeps use balanced blocks
    switch (variant) {
      case KernelVariant::H3: spec.tuple = {sz, sz, 2, 2}; break;
      case KernelVariant::H4: spec.tuple = {sz, 2, sz, 2}; break;
      default: spec.tuple = {sz, sz, sz, sz}; break;
    }
    spec.m = 0;
    spec.s = s;
    spec.weights = variant != KernelVariant::Generic;

    RtSweepPoint pt;
    pt.size = sz;
    pt.m = 0;
    pt.est = mc_operator_norm(spec, p, n_samples, rng::derive_seed(seed, sz));

    const double N1 = spec.tuple.N1, N2 = spec.tuple.N2, N3 = spec.tuple.N3;
    switch (variant) {
      case KernelVariant::H1:
        pt.paper_rhs = p * std::pow(N1 * N3, -0.5 + s + eps);
        break;
      case KernelVariant::H2:
        pt.paper_rhs = p * std::pow(N2 * N3, -0.5 + s + eps);
        break;
      case KernelVariant::H3:
        pt.paper_rhs = std::sqrt(p) * std::pow(N1, -s + eps);
        break;
      case KernelVariant::H4:
        pt.paper_rhs = std::sqrt(p) * std::pow(N2, -s + eps);
        break;
      case KernelVariant::Generic: {
        // max over partitions keeping n2 on the input side
        const SparseTensor h = base_tensor({spec.tuple, 0}, 16);
        double ref = 0.0;
        const std::vector<Partition> parts = {
            {{"n2"}, {"n", "n1", "n3"}},
            {{"n1", "n2"}, {"n", "n3"}},
            {{"n2", "n3"}, {"n", "n1"}},
            {{"n1", "n2", "n3"}, {"n"}}};
        for (const Partition& pp : parts) ref = std::max(ref, partition_norm(h, pp));
        pt.paper_rhs = ref;
        break;
      }
    }
    pt.ratio = pt.paper_rhs > 0.0 ? pt.est.estimate / pt.paper_rhs : 0.0;
    rep.points.push_back(pt);
    xs.push_back(sz);
    ys.push_back(variant == KernelVariant::Generic ? pt.ratio : pt.est.estimate);
  }
  rep.slope = stats::loglog_slope(xs, ys);
  rep.pass = rep.slope <= slope_cap;
  return rep;
}

MomentGrowthReport moment_growth_check(const RandomKernelSpec& spec,
                                       const std::vector<double>& ps,
                                       int n_samples, std::uint64_t seed,
                                       double tol) {
  MomentGrowthReport rep;
  rep.spec = spec;
  rep.k = (spec.variant == KernelVariant::H3 || spec.variant == KernelVariant::H4)
              ? 1 : 2;
  const KernelPlan plan = make_plan(spec, 16);
  const auto norms = mc_norm_samples(plan, n_samples, seed);
  double base = 0.0;
  for (double p : ps) {
    const double est = lp_mean(norms, p);
    rep.ps.push_back(p);
    rep.estimates.push_back(est);
    if (p == ps.front()) base = est;
    const double allowed = base * std::pow(p / ps.front(), rep.k / 2.0);
    rep.worst_ratio = std::max(rep.worst_ratio, est / allowed);
  }
  rep.pass = rep.worst_ratio <= tol;
  return rep;
}

namespace {

FourierField embed(const FourierField& f, int radius) {
  if (f.grid_radius() == radius) return f;
  FourierField out(radius);
  for (int i = 0; i < f.size(); ++i) out.set(f.disc().point(i), f.coeffs()[i]);
  return out;
}

// time grid on [-4T, 4T) fine enough for the Nyquist guard at this radius
void stochastic_grid(double T, int radius, double& t0, double& dt, int& count) {
  int J = 256;
  const double need = 64.0 / M_PI * T * radius * radius * 1.3;
  while (J < need) J *= 2;
  t0 = -4.0 * T;
  dt = 8.0 * T / J;
  count = J;
}

}  // namespace

StochasticMomentResult stochastic_cubic_second_moment(const DyadicTuple& tuple,
                                                      double s, double b_prime,
                                                      double T, int n_samples,
                                                      std::uint64_t seed) {
  if (T <= 0.0 || T > 1.0)
    throw std::invalid_argument("stochastic_cubic_second_moment: T in (0,1]");
  StochasticMomentResult res;
  res.T = T;
  const int R = std::max({tuple.N, tuple.N1, tuple.N2, tuple.N3});
  double t0, dt;
  int J;
  stochastic_grid(T, R, t0, dt, J);
  const double L = dt * J;

  // closed form: 2 * sum over quads of <n>^{2s} prod <n_j>^{-2} * J(|n|^2, m)
  std::map<std::pair<long, long>, double> weight_by_qm;
  {
    auto pts = [&](int N) {
      std::vector<Vec2i> v;
      for (const Vec2i& n : DiscIndex::get(N)->points())
        if (in_block(n, N)) v.push_back(n);
      return v;
    };
    const auto p1 = pts(tuple.N1), p2 = pts(tuple.N2), p3 = pts(tuple.N3);
    for (const Vec2i& n1 : p1)
      for (const Vec2i& n2 : p2) {
        if (n1 == n2) continue;
        const Vec2i d = n1 - n2;
        for (const Vec2i& n3 : p3) {
          if (n2 == n3) continue;
          const Vec2i n = d + n3;
          if (!in_block(n, tuple.N)) continue;
          const long m = phase_phi(n, n1, n2, n3);
          const double w = std::pow(jb(n), 2.0 * s) /
                           (std::norm(cd(jb(n1), 0.0)) * (1.0 + norm2(n2)) *
                            (1.0 + norm2(n3)));
          weight_by_qm[{norm2(n), m}] += w;
        }
      }
  }
  double closed = 0.0;
  for (const auto& [qm, w] : weight_by_qm) {
    const double q = static_cast<double>(qm.first);
    const double m = static_cast<double>(qm.second);
    double Jnm = 0.0;
    for (int k = 0; k < J; ++k) {
      const long kk = k <= J / 2 ? k : k - J;
      const double tau = 2.0 * M_PI * kk / L;
      const double mod = tau + q;
      Jnm += std::pow(1.0 + mod * mod, -b_prime) *
             std::norm(eta_hat_disc(T, t0, dt, J, mod - m));
    }
    closed += 2.0 * w * Jnm / L;
  }
  res.closed_form = closed;

  // MC over mu-samples through the identical discrete proxy
  std::vector<double> sq;
  sq.reserve(n_samples);
  const XsbParams params{s, -b_prime, 0.01};
  for (int i = 0; i < n_samples; ++i) {
    const GaussianEnsemble ens(rng::derive_seed(seed, i), R);
    const FourierField z = sample_mu(R, ens);
    const FourierField z1 = project(z, ProjMode::Dyadic, tuple.N1);
    const FourierField z2 = project(z, ProjMode::Dyadic, tuple.N2);
    const FourierField z3 = project(z, ProjMode::Dyadic, tuple.N3);
    SpaceTimeField u = sample_spacetime(t0, dt, J, [&](double t) {
      const FourierField w = nonres_trilinear(
          linear_flow(z1, t), linear_flow(z2, t), linear_flow(z3, t));
      return project(w, ProjMode::Dyadic, tuple.N);
    });
    u = apply_window(std::move(u), T);
    const double nn = xsb_norm(u, params);
    sq.push_back(nn * nn);
  }
  res.mc.p = 2.0;
  res.mc.n_samples = n_samples;
  res.mc.estimate = stats::mean(sq);
  const auto ci = stats::bootstrap_ci(
      sq, [](const std::vector<double>& v) { return stats::mean(v); }, 1000,
      rng::derive_seed(seed, 0xC2));
  res.mc.ci_lo = ci.lo;
  res.mc.ci_hi = ci.hi;
  return res;
}

double resonant_term_norm(const std::string& pattern, const FourierField& w,
                          const FourierField& z, double s, double eps, double T) {
  if (pattern.size() != 3)
    throw std::invalid_argument("resonant_term_norm: pattern has 3 slots");
  const int R = std::max(w.grid_radius(), z.grid_radius());
  const FourierField we = embed(w, R), ze = embed(z, R);
  std::array<const FourierField*, 3> slot{};
  for (int i = 0; i < 3; ++i) {
    if (pattern[i] == 'w')
      slot[i] = &we;
    else if (pattern[i] == 'z')
      slot[i] = &ze;
    else
      throw std::invalid_argument("resonant_term_norm: slots are 'w' or 'z'");
  }
  double t0, dt;
  int J;
  stochastic_grid(T, R, t0, dt, J);
  SpaceTimeField u = sample_spacetime(t0, dt, J, [&](double t) {
    return res_trilinear(linear_flow(*slot[0], t), linear_flow(*slot[1], t),
                         linear_flow(*slot[2], t));
  });
  u = apply_window(std::move(u), T);
  return xsb_norm(u, {s, -0.5 + 2.0 * eps, eps});
}

}  // namespace wick2d
