#include "wick2d/gibbs.hpp"

#include <algorithm>
#include <stdexcept>

#include "wick2d/fft2.hpp"

namespace wick2d {

WickConstants sigma(int N) {
  if (N < 1) throw std::invalid_argument("sigma: N must be >= 1");
  double sum = 0.0, comp = 0.0;  // Kahan
  const long r2 = static_cast<long>(N) * N;
  for (int x = -N; x <= N; ++x)
    for (int y = -N; y <= N; ++y) {
      const long q = static_cast<long>(x) * x + static_cast<long>(y) * y;
      if (q > r2) continue;
      const double term = 1.0 / (1.0 + static_cast<double>(q));
      const double t = sum + term;
      if (std::abs(sum) >= std::abs(term))
        comp += (sum - t) + term;
      else
        comp += (term - t) + sum;
      sum = t;
    }
  return {N, sum + comp};
}

FourierField sample_mu(int radius, const GaussianEnsemble& ensemble) {
  if (ensemble.grid_radius() < radius)
    throw std::invalid_argument("sample_mu: ensemble radius too small");
  FourierField f(radius);
  const auto& d = f.disc();
  for (int i = 0; i < f.size(); ++i) {
    const Vec2i& n = d.point(i);
    f.coeffs()[i] = ensemble.g(n) / jb(n);
  }
  return f;
}

WickQuartic wick_quartic(const FourierField& u, int N) {
  if (N > u.grid_radius())
    throw std::invalid_argument("wick_quartic: N exceeds grid radius");
  const double sig = sigma(N).sigma_N;
  // restrict to the band so the FFT grid only needs to resolve |P_N u|^4
  FourierField pu(N);
  const FourierField proj = project(u, ProjMode::Leq, N);
  for (int i = 0; i < pu.size(); ++i) pu.coeffs()[i] = proj.at(pu.disc().point(i));

  const int M = good_fft_size(4 * N + 2);
  const Eigen::MatrixXcd phys = to_physical(pu, M);
  WickQuartic out;
  out.pointwise.resize(M, M);
  double acc = 0.0, comp = 0.0;
  for (int c = 0; c < M; ++c)
    for (int r = 0; r < M; ++r) {
      const double a2 = std::norm(phys(r, c));
      const double v = a2 * a2 - 4.0 * sig * a2 + 2.0 * sig * sig;
      out.pointwise(r, c) = v;
      const double t = acc + v;
      if (std::abs(acc) >= std::abs(v))
        comp += (acc - t) + v;
      else
        comp += (v - t) + acc;
      acc = t;
    }
  out.integrated = (acc + comp) / (static_cast<double>(M) * M);
  return out;
}

double gibbs_log_weight(const FourierField& u, int N) {
  return -0.25 * wick_quartic(u, N).integrated;
}

double effective_sample_size(const std::vector<double>& log_weights) {
  if (log_weights.empty())
    throw std::invalid_argument("effective_sample_size: empty weights");
  const double mx = *std::max_element(log_weights.begin(), log_weights.end());
  double s1 = 0.0, s2 = 0.0;
  for (double lw : log_weights) {
    const double w = std::exp(lw - mx);
    s1 += w;
    s2 += w * w;
  }
  if (s2 == 0.0) throw std::invalid_argument("effective_sample_size: all-zero weights");
  return s1 * s1 / s2;
}

}  // namespace wick2d
