#pragma once

#include <cstdint>
#include <vector>

#include "wick2d/field.hpp"
#include "wick2d/rng.hpp"

namespace wick2d {

// Seeded family {g_n} of independent standard complex Gaussians (E|g|^2 = 1)
// on |n| <= grid_radius; each g_n is a pure function of (seed, n).
class GaussianEnsemble {
 public:
  GaussianEnsemble(std::uint64_t seed, int grid_radius)
      : seed_(seed), disc_(DiscIndex::get(grid_radius)),
        g_(disc_->size()) {
    for (int i = 0; i < disc_->size(); ++i) {
      const Vec2i& n = disc_->point(i);
      g_[i] = rng::complex_gaussian(seed_, rng::pack_point(n.x(), n.y()));
    }
  }

  std::uint64_t seed() const { return seed_; }
  int grid_radius() const { return disc_->radius(); }
  const DiscIndex& disc() const { return *disc_; }
  cd g(int i) const { return g_[i]; }
  cd g(const Vec2i& n) const {
    const int i = disc_->find(n);
    if (i < 0) throw std::out_of_range("GaussianEnsemble: frequency outside disc");
    return g_[i];
  }

 private:
  std::uint64_t seed_;
  std::shared_ptr<const DiscIndex> disc_;
  std::vector<cd> g_;
};

struct WickConstants {
  int N = 1;
  double sigma_N = 0.0;
};

struct WeightedSample {
  FourierField field;
  double log_weight = 0.0;
};

// sigma_N = sum_{|n| <= N} <n>^{-2} (Kahan-compensated)
WickConstants sigma(int N);

// u^(n) = g_n / <n> on |n| <= radius
FourierField sample_mu(int radius, const GaussianEnsemble& ensemble);

struct WickQuartic {
  Eigen::MatrixXd pointwise;  // :|P_N u|^4: on the physical grid
  double integrated = 0.0;    // its normalized integral
};

// :|P_N u|^4: = |P_N u|^4 - 4 sigma_N |P_N u|^2 + 2 sigma_N^2
WickQuartic wick_quartic(const FourierField& u, int N);

// log of the Gibbs density factor: -1/4 * integral of the Wick quartic
double gibbs_log_weight(const FourierField& u, int N);

// (sum w)^2 / sum w^2 for weights w_i = exp(log_w_i - max log_w)
double effective_sample_size(const std::vector<double>& log_weights);

}  // namespace wick2d
