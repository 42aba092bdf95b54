#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace wick2d {

using Vec2i = Eigen::Vector2i;

inline long norm2(const Vec2i& n) {
  return static_cast<long>(n.x()) * n.x() + static_cast<long>(n.y()) * n.y();
}

// Japanese bracket <n> = (1 + |n|^2)^{1/2}
inline double jb(const Vec2i& n) { return std::sqrt(1.0 + static_cast<double>(norm2(n))); }
inline double jb(double x) { return std::sqrt(1.0 + x * x); }

// Dyadic block of a frequency: 1 for |n| <= 1, else the smallest power of two
// N with |n| <= N (so N/2 < |n| <= N).
inline int dyadic_block(const Vec2i& n) {
  const long q = norm2(n);
  if (q <= 1) return 1;
  int N = 2;
  while (static_cast<long>(N) * N < q) N <<= 1;
  return N;
}

inline bool in_block(const Vec2i& n, int N) {
  const long q = norm2(n);
  if (N == 1) return q <= 1;
  const long hi = static_cast<long>(N) * N;
  const long lo = hi / 4;
  return q > lo && q <= hi;
}

// Enumeration of the Euclidean disc |n| <= R, lexicographic in (nx, ny),
// with a dense reverse lookup. Shared immutable instances cached per radius.
class DiscIndex {
 public:
  explicit DiscIndex(int radius) : radius_(radius), side_(2 * radius + 1) {
    if (radius < 0) throw std::invalid_argument("DiscIndex: negative radius");
    lookup_.assign(static_cast<std::size_t>(side_) * side_, -1);
    const long r2 = static_cast<long>(radius) * radius;
    for (int x = -radius; x <= radius; ++x)
      for (int y = -radius; y <= radius; ++y)
        if (static_cast<long>(x) * x + static_cast<long>(y) * y <= r2) {
          lookup_[flat(x, y)] = static_cast<int>(points_.size());
          points_.emplace_back(x, y);
        }
  }

  int radius() const { return radius_; }
  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<Vec2i>& points() const { return points_; }
  const Vec2i& point(int i) const { return points_[static_cast<std::size_t>(i)]; }

  // index of n in the enumeration, or -1 if |n| > radius
  int find(const Vec2i& n) const {
    if (std::abs(n.x()) > radius_ || std::abs(n.y()) > radius_) return -1;
    return lookup_[flat(n.x(), n.y())];
  }

  static std::shared_ptr<const DiscIndex> get(int radius) {
    static std::mutex mu;
    static std::unordered_map<int, std::shared_ptr<const DiscIndex>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(radius);
    if (it != cache.end()) return it->second;
    auto d = std::make_shared<const DiscIndex>(radius);
    cache.emplace(radius, d);
    return d;
  }

 private:
  std::size_t flat(int x, int y) const {
    return static_cast<std::size_t>(x + radius_) * side_ + (y + radius_);
  }

  int radius_;
  int side_;
  std::vector<Vec2i> points_;
  std::vector<int> lookup_;
};

}  // namespace wick2d
