#pragma once

#include <complex>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

#include "wick2d/disc.hpp"

namespace wick2d {

using cd = std::complex<double>;

enum class ProjMode { Leq, Dyadic, LeqDyadic, Complement };

// Spectral coefficients u^(n) on the Euclidean disc |n| <= grid_radius of Z^2.
// With the normalized measure dx = (2pi)^{-2} dx on T^2 the e_n are unit
// vectors, so the L^2 norm is the plain l^2 norm of coeffs.
class FourierField {
 public:
  FourierField() : disc_(DiscIndex::get(0)), coeffs_(Eigen::VectorXcd::Zero(1)) {}

  explicit FourierField(int radius)
      : disc_(DiscIndex::get(radius)),
        coeffs_(Eigen::VectorXcd::Zero(disc_->size())) {}

  int grid_radius() const { return disc_->radius(); }
  const DiscIndex& disc() const { return *disc_; }
  int size() const { return disc_->size(); }

  Eigen::VectorXcd& coeffs() { return coeffs_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }

  cd at(const Vec2i& n) const {
    const int i = disc_->find(n);
    return i < 0 ? cd(0.0, 0.0) : coeffs_[i];
  }
  void set(const Vec2i& n, cd v) {
    const int i = disc_->find(n);
    if (i < 0) throw std::out_of_range("FourierField::set: frequency outside disc");
    coeffs_[i] = v;
  }

  double l2_norm() const { return coeffs_.norm(); }
  double l2_norm_sq() const { return coeffs_.squaredNorm(); }

  double hs_norm(double s) const {
    double acc = 0.0;
    for (int i = 0; i < size(); ++i) {
      const double w = std::pow(jb(disc_->point(i)), 2.0 * s);
      acc += w * std::norm(coeffs_[i]);
    }
    return std::sqrt(acc);
  }

  // 1/2 * integral |grad u|^2 contributions use |n|^2 weights
  double h1dot_sq() const {
    double acc = 0.0;
    for (int i = 0; i < size(); ++i)
      acc += static_cast<double>(norm2(disc_->point(i))) * std::norm(coeffs_[i]);
    return acc;
  }

  FourierField& operator+=(const FourierField& o) {
    require_same(o);
    coeffs_ += o.coeffs_;
    return *this;
  }
  FourierField& operator-=(const FourierField& o) {
    require_same(o);
    coeffs_ -= o.coeffs_;
    return *this;
  }
  FourierField& operator*=(cd a) {
    coeffs_ *= a;
    return *this;
  }
  friend FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
  friend FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
  friend FourierField operator*(cd a, FourierField f) { return f *= a; }

  void require_same(const FourierField& o) const {
    if (grid_radius() != o.grid_radius())
      throw std::invalid_argument("FourierField: mismatched grid radii");
  }

 private:
  std::shared_ptr<const DiscIndex> disc_;
  Eigen::VectorXcd coeffs_;
};

// P_N / Q_N / S_N / S_N^perp, per the dyadic-block convention in disc.hpp.
inline FourierField project(const FourierField& f, ProjMode mode, int N) {
  if (N < 1) throw std::invalid_argument("project: N must be >= 1");
  if (mode != ProjMode::Complement && N > f.grid_radius() &&
      (mode == ProjMode::Dyadic))
    throw std::invalid_argument("project: dyadic block not representable on grid");
  FourierField out(f.grid_radius());
  const auto& d = f.disc();
  for (int i = 0; i < f.size(); ++i) {
    const Vec2i& n = d.point(i);
    bool keep = false;
    switch (mode) {
      case ProjMode::Leq:
      case ProjMode::LeqDyadic:
        keep = norm2(n) <= static_cast<long>(N) * N;
        break;
      case ProjMode::Dyadic:
        keep = in_block(n, N);
        break;
      case ProjMode::Complement:
        keep = norm2(n) > static_cast<long>(N) * N;
        break;
    }
    if (keep) out.coeffs()[i] = f.coeffs()[i];
  }
  return out;
}

// e^{it Delta}: coefficient at n picks up e^{-it|n|^2}
inline FourierField linear_flow(const FourierField& f, double t) {
  FourierField out = f;
  const auto& d = f.disc();
  for (int i = 0; i < f.size(); ++i) {
    const double ph = -t * static_cast<double>(norm2(d.point(i)));
    out.coeffs()[i] *= cd(std::cos(ph), std::sin(ph));
  }
  return out;
}

// Binary snapshot: uint32 grid_radius (LE), then row-major complex64
// (float32 re, float32 im) over the full (2R+1)^2 square, zeros off-disc.
inline void save_snapshot(const FourierField& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_snapshot: cannot open " + path);
  const std::uint32_t R = static_cast<std::uint32_t>(f.grid_radius());
  os.write(reinterpret_cast<const char*>(&R), sizeof(R));
  const int r = f.grid_radius();
  for (int x = -r; x <= r; ++x)
    for (int y = -r; y <= r; ++y) {
      const cd v = f.at(Vec2i(x, y));
      const float re = static_cast<float>(v.real());
      const float im = static_cast<float>(v.imag());
      os.write(reinterpret_cast<const char*>(&re), sizeof(re));
      os.write(reinterpret_cast<const char*>(&im), sizeof(im));
    }
}

inline FourierField load_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_snapshot: cannot open " + path);
  std::uint32_t R = 0;
  is.read(reinterpret_cast<char*>(&R), sizeof(R));
  FourierField f(static_cast<int>(R));
  const int r = static_cast<int>(R);
  for (int x = -r; x <= r; ++x)
    for (int y = -r; y <= r; ++y) {
      float re = 0.f, im = 0.f;
      is.read(reinterpret_cast<char*>(&re), sizeof(re));
      is.read(reinterpret_cast<char*>(&im), sizeof(im));
      if (f.disc().find(Vec2i(x, y)) >= 0) f.set(Vec2i(x, y), cd(re, im));
    }
  return f;
}

}  // namespace wick2d
