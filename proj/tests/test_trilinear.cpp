// Trilinear convolution operators and the renormalized nonlinearity identity.
#include <doctest.h>

#include "wick2d/rng.hpp"
#include "wick2d/trilinear.hpp"

using namespace wick2d;

namespace {

FourierField random_field(int radius, std::uint64_t seed) {
  FourierField f(radius);
  for (int i = 0; i < f.size(); ++i)
    f.coeffs()[i] = rng::complex_gaussian(seed, static_cast<std::uint64_t>(i));
  return f;
}

// O(P^3) reference convolution straight from the definition
FourierField brute_cubic(const FourierField& v1, const FourierField& v2,
                         const FourierField& v3, bool exclude) {
  FourierField out(v1.grid_radius());
  const auto& d = v1.disc();
  for (int i1 = 0; i1 < d.size(); ++i1)
    for (int i2 = 0; i2 < d.size(); ++i2)
      for (int i3 = 0; i3 < d.size(); ++i3) {
        const Vec2i n = d.point(i1) - d.point(i2) + d.point(i3);
        const int i = d.find(n);
        if (i < 0) continue;
        if (exclude && (n == d.point(i1) || n == d.point(i3))) continue;
        out.coeffs()[i] +=
            v1.coeffs()[i1] * std::conj(v2.coeffs()[i2]) * v3.coeffs()[i3];
      }
  return out;
}

}  // namespace

TEST_CASE("cubic_conv matches the defining triple sum") {
  const int R = 3;
  const FourierField v1 = random_field(R, 1), v2 = random_field(R, 2),
                     v3 = random_field(R, 3);
  const FourierField fast = cubic_conv(v1, v2, v3);
  const FourierField slow = brute_cubic(v1, v2, v3, false);
  CHECK((fast.coeffs() - slow.coeffs()).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("nonres_trilinear matches the excluded triple sum") {
  const int R = 3;
  const FourierField v1 = random_field(R, 4), v2 = random_field(R, 5),
                     v3 = random_field(R, 6);
  const FourierField fast = nonres_trilinear(v1, v2, v3);
  const FourierField slow = brute_cubic(v1, v2, v3, true);
  CHECK((fast.coeffs() - slow.coeffs()).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("res_trilinear is the diagonal product") {
  const int R = 4;
  const FourierField v1 = random_field(R, 7), v2 = random_field(R, 8),
                     v3 = random_field(R, 9);
  const FourierField r = res_trilinear(v1, v2, v3);
  for (int i = 0; i < r.size(); ++i)
    CHECK(std::abs(r.coeffs()[i] - v1.coeffs()[i] * std::conj(v2.coeffs()[i]) *
                                       v3.coeffs()[i]) < 1e-14);
}

TEST_CASE("nonresonant minus resonant equals the renormalized multiplier") {
  // N(v) - R(v) = (|v|^2 - 2 ||v||^2) v: the two excluded diagonals n = n1 and
  // n = n3 each contribute ||v||^2 v(n), double counting the resonant cube.
  for (std::uint64_t seed : {10, 11, 12}) {
    const FourierField v = random_field(8, seed);
    const FourierField lhs = nonres_trilinear(v, v, v) - res_trilinear(v, v, v);
    const FourierField rhs = renorm_nonlinearity(v);
    CHECK((lhs.coeffs() - rhs.coeffs()).lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("cubic_conv of a single mode") {
  FourierField v(2);
  v.set(Vec2i(1, 0), cd(2.0, 0.0));
  const FourierField c = cubic_conv(v, v, v);
  // only n = n1 - n2 + n3 = (1,0) survives, with value |2|^2 * 2 = 8
  CHECK(std::abs(c.at(Vec2i(1, 0)) - cd(8.0, 0.0)) < 1e-14);
  CHECK(c.l2_norm() == doctest::Approx(8.0).epsilon(1e-14));
  // the fully excluded version vanishes for a single mode
  CHECK(nonres_trilinear(v, v, v).l2_norm() == 0.0);
}
