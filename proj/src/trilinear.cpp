#include "wick2d/trilinear.hpp"

namespace wick2d {

namespace {

// dense accumulator over the square |k|_inf <= 2R
struct PairGrid {
  int R;
  int side;
  std::vector<cd> a;
  explicit PairGrid(int radius)
      : R(radius), side(4 * radius + 1),
        a(static_cast<std::size_t>(side) * side, cd(0.0, 0.0)) {}
  cd& at(int kx, int ky) {
    return a[static_cast<std::size_t>(kx + 2 * R) * side + (ky + 2 * R)];
  }
  cd get(int kx, int ky) const {
    if (std::abs(kx) > 2 * R || std::abs(ky) > 2 * R) return cd(0.0, 0.0);
    return a[static_cast<std::size_t>(kx + 2 * R) * side + (ky + 2 * R)];
  }
};

}  // namespace

FourierField cubic_conv(const FourierField& v1, const FourierField& v2,
                        const FourierField& v3) {
  v1.require_same(v2);
  v1.require_same(v3);
  const int R = v1.grid_radius();
  const auto& d = v1.disc();
  const int P = d.size();

  PairGrid A(R);  // A(k) = sum_{n1 - n2 = k} v1(n1) conj(v2(n2))
  for (int i1 = 0; i1 < P; ++i1) {
    const cd a1 = v1.coeffs()[i1];
    if (a1 == cd(0.0, 0.0)) continue;
    const Vec2i& n1 = d.point(i1);
    for (int i2 = 0; i2 < P; ++i2) {
      const cd a2 = v2.coeffs()[i2];
      if (a2 == cd(0.0, 0.0)) continue;
      const Vec2i& n2 = d.point(i2);
      A.at(n1.x() - n2.x(), n1.y() - n2.y()) += a1 * std::conj(a2);
    }
  }

  FourierField out(R);
  for (int i = 0; i < P; ++i) {
    const Vec2i& n = d.point(i);
    cd acc(0.0, 0.0);
    for (int i3 = 0; i3 < P; ++i3) {
      const cd a3 = v3.coeffs()[i3];
      if (a3 == cd(0.0, 0.0)) continue;
      const Vec2i& n3 = d.point(i3);
      acc += A.get(n.x() - n3.x(), n.y() - n3.y()) * a3;
    }
    out.coeffs()[i] = acc;
  }
  return out;
}

FourierField nonres_trilinear(const FourierField& v1, const FourierField& v2,
                              const FourierField& v3) {
  // inclusion-exclusion on the excluded diagonals n = n1 and n = n3:
  //   N = C - <v3,v2> v1 - <v1,v2> v3 + diag(v1,v2,v3)
  FourierField out = cubic_conv(v1, v2, v3);
  const cd ip32 = v2.coeffs().dot(v3.coeffs());  // sum v3 conj(v2)
  const cd ip12 = v2.coeffs().dot(v1.coeffs());
  out.coeffs() -= ip32 * v1.coeffs();
  out.coeffs() -= ip12 * v3.coeffs();
  out.coeffs() += v1.coeffs().cwiseProduct(v2.coeffs().conjugate()).cwiseProduct(v3.coeffs());
  return out;
}

FourierField res_trilinear(const FourierField& v1, const FourierField& v2,
                           const FourierField& v3) {
  v1.require_same(v2);
  v1.require_same(v3);
  FourierField out(v1.grid_radius());
  out.coeffs() = v1.coeffs().cwiseProduct(v2.coeffs().conjugate()).cwiseProduct(v3.coeffs());
  return out;
}

FourierField renorm_nonlinearity(const FourierField& v) {
  // N(v) - R(v) = C(v) - 2 ||v||^2 v exactly
  FourierField out = cubic_conv(v, v, v);
  out.coeffs() -= 2.0 * v.l2_norm_sq() * v.coeffs();
  return out;
}

}  // namespace wick2d
