// Random tensors: kernel construction against the definition, Wick-ordered
// contractions, norm estimators, and the stochastic second-moment check.
#include <doctest.h>

#include <Eigen/SVD>

#include "wick2d/random_tensor.hpp"

using namespace wick2d;

TEST_CASE("variant names round trip") {
  for (KernelVariant v : {KernelVariant::Generic, KernelVariant::H1,
                          KernelVariant::H2, KernelVariant::H3, KernelVariant::H4})
    CHECK(parse_kernel_variant(kernel_variant_name(v)) == v);
  CHECK_THROWS(parse_kernel_variant("h5"));
}

TEST_CASE("H1 kernel entries match the defining sum over quadruples") {
  RandomKernelSpec spec;
  spec.variant = KernelVariant::H1;
  spec.tuple = {2, 2, 2, 2};
  spec.m = 0;
  spec.s = 0.1;
  const GaussianEnsemble ens(33, 2);
  const KernelMatrix km = build_kernel(spec, ens);
  REQUIRE_FALSE(km.rows.empty());
  Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(km.M.rows(), km.M.cols());
  auto find_key = [](const std::vector<TensorKey>& keys, const TensorKey& k) {
    for (std::size_t i = 0; i < keys.size(); ++i)
      if (!TensorKeyLess()(keys[i], k) && !TensorKeyLess()(k, keys[i]))
        return static_cast<int>(i);
    return -1;
  };
  for (const Quad& q : enumerate_S(spec.tuple, spec.m)) {
    const Vec2i &n = q[0], &n1 = q[1], &n2 = q[2], &n3 = q[3];
    const int r = find_key(km.rows, {n});
    const int c = find_key(km.cols, {n2});
    REQUIRE(r >= 0);
    REQUIRE(c >= 0);
    const double w = std::pow(jb(n), spec.s) / std::pow(jb(n2), spec.s) /
                     (jb(n1) * jb(n3));
    want(r, c) += w * ens.g(n1) * ens.g(n3);
  }
  CHECK((km.M - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("H4 kernel conjugates the n2 slot") {
  RandomKernelSpec spec;
  spec.variant = KernelVariant::H4;
  spec.tuple = {2, 2, 2, 2};
  spec.m = 0;
  const GaussianEnsemble ens(41, 2);
  const KernelMatrix km = build_kernel(spec, ens);
  Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(km.M.rows(), km.M.cols());
  auto find_key = [](const std::vector<TensorKey>& keys, const TensorKey& k) {
    for (std::size_t i = 0; i < keys.size(); ++i)
      if (!TensorKeyLess()(keys[i], k) && !TensorKeyLess()(k, keys[i]))
        return static_cast<int>(i);
    return -1;
  };
  for (const Quad& q : enumerate_S(spec.tuple, spec.m)) {
    const Vec2i &n = q[0], &n1 = q[1], &n2 = q[2], &n3 = q[3];
    const int r = find_key(km.rows, {n});
    const int c = find_key(km.cols, {n1, n3});
    REQUIRE(r >= 0);
    REQUIRE(c >= 0);
    const double w = std::pow(jb(n), spec.s) /
                     (std::pow(jb(n1), spec.s) * std::pow(jb(n3), spec.s)) / jb(n2);
    want(r, c) += w * std::conj(ens.g(n2));
  }
  CHECK((km.M - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("kernel construction is a pure function of the seed") {
  RandomKernelSpec spec;
  spec.tuple = {4, 4, 4, 4};
  const KernelMatrix a = build_kernel(spec, GaussianEnsemble(9, 4));
  const KernelMatrix b = build_kernel(spec, GaussianEnsemble(9, 4));
  const KernelMatrix c = build_kernel(spec, GaussianEnsemble(10, 4));
  CHECK((a.M - b.M).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.M - c.M).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("an unreachable output block yields an empty quadruple set") {
  CHECK(enumerate_S({16, 1, 1, 1}, 0).empty());
}

TEST_CASE("generic contraction: conjugation and Wick ordering at repeated points") {
  const GaussianEnsemble ens(55, 2);
  const Vec2i p(1, 1), out(0, 1);
  const cd g = ens.g(p);

  SparseTensor h({"n", "n1", "n2", "n3"});
  h.set({out, p, p, Vec2i(1, 0)}, cd(2.0, 0.0));

  // n2 alone: a single conjugated factor
  const SparseTensor t2 = build_generic_random_tensor(h, {"n2"}, ens);
  CHECK(std::abs(t2.at({out, p, Vec2i(1, 0)}) - cd(2.0, 0.0) * std::conj(g)) < 1e-14);

  // n1 and n2 at the same point: :g conj(g): = |g|^2 - 1
  const SparseTensor t12 = build_generic_random_tensor(h, {"n1", "n2"}, ens);
  CHECK(std::abs(t12.at({out, Vec2i(1, 0)}) -
                 cd(2.0, 0.0) * (std::norm(g) - 1.0)) < 1e-14);

  // two unconjugated copies of the same point: plain g^2
  SparseTensor h2({"n", "n1", "n2", "n3"});
  h2.set({out, p, Vec2i(1, 0), p}, cd(1.0, 0.0));
  const SparseTensor t13 = build_generic_random_tensor(h2, {"n1", "n3"}, ens);
  CHECK(std::abs(t13.at({out, Vec2i(1, 0)}) - g * g) < 1e-14);

  // no Gaussian axes: identity
  const SparseTensor t0 = build_generic_random_tensor(h, {}, ens);
  CHECK(t0.entries().size() == h.entries().size());
  CHECK(std::abs(t0.at({out, p, p, Vec2i(1, 0)}) - cd(2.0, 0.0)) == 0.0);
}

TEST_CASE("sigma_max_dense agrees with BDCSVD") {
  Eigen::MatrixXcd M(10, 7);
  for (int r = 0; r < 10; ++r)
    for (int c = 0; c < 7; ++c)
      M(r, c) = rng::complex_gaussian(3, static_cast<std::uint64_t>(r * 7 + c));
  const double want = Eigen::BDCSVD<Eigen::MatrixXcd>(M).singularValues()(0);
  CHECK(sigma_max_dense(M) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("mc_operator_norm returns a coherent estimate") {
  RandomKernelSpec spec;
  spec.tuple = {2, 2, 2, 2};
  const NormEstimate est = mc_operator_norm(spec, 2.0, 50, 21);
  CHECK(est.n_samples == 50);
  CHECK(est.estimate > 0.0);
  CHECK(est.ci_lo <= est.estimate);
  CHECK(est.estimate <= est.ci_hi);
  // same seed reproduces, different seed varies
  CHECK(mc_operator_norm(spec, 2.0, 50, 21).estimate == est.estimate);
  CHECK(mc_operator_norm(spec, 2.0, 50, 22).estimate != est.estimate);
}

TEST_CASE("moment growth at small scale stays within the Gaussian envelope") {
  RandomKernelSpec spec;
  spec.tuple = {4, 4, 4, 4};
  const MomentGrowthReport rep = moment_growth_check(spec, {2.0, 4.0}, 100, 13);
  REQUIRE(rep.estimates.size() == 2);
  CHECK(rep.estimates[1] >= rep.estimates[0]);  // p-norms are nondecreasing
  CHECK(rep.worst_ratio <= 1.25);
  CHECK(rep.pass);
}

TEST_CASE("stochastic second moment: closed form against Monte Carlo") {
  const StochasticMomentResult r =
      stochastic_cubic_second_moment({2, 2, 2, 2}, 0.1, 0.48, 0.125, 150, 17);
  CHECK(r.closed_form > 0.0);
  CHECK(r.mc.n_samples == 150);
  const double width = r.mc.ci_hi - r.mc.ci_lo;
  CHECK(std::abs(r.closed_form - r.mc.estimate) <= 3.0 * width);
  CHECK_THROWS(stochastic_cubic_second_moment({2, 2, 2, 2}, 0.1, 0.48, 2.0, 10, 1));
}

TEST_CASE("resonant term norm evaluates and validates its pattern") {
  const FourierField z = sample_mu(2, GaussianEnsemble(61, 2));
  FourierField w = sample_mu(2, GaussianEnsemble(62, 2));
  w *= cd(1.0 / w.l2_norm(), 0.0);
  const double v = resonant_term_norm("zzz", w, z, 0.1, 0.01, 0.25);
  CHECK(v >= 0.0);
  CHECK(std::isfinite(v));
  CHECK_THROWS(resonant_term_norm("zz", w, z, 0.1, 0.01, 0.25));
}

TEST_CASE("H3 scaling sweep smoke") {
  const RtScalingReport rep =
      verify_rt_scaling(KernelVariant::H3, {2, 4}, 2.0, 0.25, 30, 0.1, 7);
  REQUIRE(rep.points.size() == 2);
  for (const RtSweepPoint& p : rep.points) {
    CHECK(p.est.estimate > 0.0);
    CHECK(p.paper_rhs > 0.0);
  }
  CHECK(std::isfinite(rep.slope));
}
