#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wick2d/rng.hpp"

namespace wick2d {
namespace stats {

inline double weighted_mean(const std::vector<double>& x, const std::vector<double>& w) {
  double sx = 0.0, sw = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += w[i] * x[i];
    sw += w[i];
  }
  if (sw == 0.0) throw std::invalid_argument("weighted_mean: zero total weight");
  return sx / sw;
}

inline double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

// deterministic uniform index in [0, n) from a counter-based stream
inline std::size_t draw_index(std::uint64_t seed, std::uint64_t ctr, std::size_t n) {
  return static_cast<std::size_t>(rng::hash3(seed, ctr, 0x452821e638d01377ULL) % n);
}

inline double bootstrap_se_weighted_mean(const std::vector<double>& x,
                                         const std::vector<double>& w,
                                         int reps, std::uint64_t seed) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("bootstrap: empty sample");
  std::vector<double> means;
  means.reserve(reps);
  std::uint64_t ctr = 0;
  for (int r = 0; r < reps; ++r) {
    double sx = 0.0, sw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = draw_index(seed, ctr++, n);
      sx += w[k] * x[k];
      sw += w[k];
    }
    if (sw > 0.0) means.push_back(sx / sw);
  }
  const double m = mean(means);
  double acc = 0.0;
  for (double v : means) acc += (v - m) * (v - m);
  return std::sqrt(acc / std::max<std::size_t>(1, means.size() - 1));
}

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// percentile bootstrap CI for a statistic of an unweighted sample
template <typename Stat>
ConfidenceInterval bootstrap_ci(const std::vector<double>& x, Stat stat, int reps,
                                std::uint64_t seed, double level = 0.95) {
  const std::size_t n = x.size();
  std::vector<double> vals;
  vals.reserve(reps);
  std::vector<double> resample(n);
  std::uint64_t ctr = 0;
  for (int r = 0; r < reps; ++r) {
    for (std::size_t i = 0; i < n; ++i) resample[i] = x[draw_index(seed, ctr++, n)];
    vals.push_back(stat(resample));
  }
  std::sort(vals.begin(), vals.end());
  const double a = (1.0 - level) / 2.0;
  const auto pick = [&](double q) {
    const double pos = q * (vals.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - i;
    return i + 1 < vals.size() ? vals[i] * (1.0 - frac) + vals[i + 1] * frac : vals.back();
  };
  return {pick(a), pick(1.0 - a)};
}

// least-squares slope of y against x
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("ls_slope: need >= 2 paired points");
  const double mx = mean(x), my = mean(y);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return ls_slope(lx, ly);
}

}  // namespace stats
}  // namespace wick2d
