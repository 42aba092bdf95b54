// Lattice-point counting: quadruple enumeration, section maxima, divisor
// pairs, the eleven bounds, and the remark counterexample.
#include <doctest.h>

#include <set>

#include "wick2d/counting.hpp"

using namespace wick2d;

namespace {

std::vector<Vec2i> block_points(int N) {
  std::vector<Vec2i> pts;
  for (const Vec2i& n : DiscIndex::get(N)->points())
    if (in_block(n, N)) pts.push_back(n);
  return pts;
}

// definition-level reference enumeration
long brute_count(const DyadicTuple& t, long m) {
  long count = 0;
  for (const Vec2i& n1 : block_points(t.N1))
    for (const Vec2i& n2 : block_points(t.N2))
      for (const Vec2i& n3 : block_points(t.N3)) {
        const Vec2i n = n1 - n2 + n3;
        if (!in_block(n, t.N)) continue;
        if (n == n1 || n == n3) continue;
        if (phase_phi(n, n1, n2, n3) != m) continue;
        ++count;
      }
  return count;
}

}  // namespace

TEST_CASE("enumerate_S matches the defining constraints") {
  for (long m : {-4L, -2L, 0L, 2L, 6L}) {
    const DyadicTuple t{1, 1, 1, 1};
    CHECK(static_cast<long>(enumerate_S(t, m).size()) == brute_count(t, m));
  }
  const DyadicTuple t2{2, 2, 1, 1};
  for (long m : {-8L, -3L, 0L, 1L, 5L})
    CHECK(static_cast<long>(enumerate_S(t2, m).size()) == brute_count(t2, m));
  // every emitted quad satisfies the constraints
  for (const Quad& q : enumerate_S({2, 2, 2, 2}, 0)) {
    CHECK(q[0] == q[1] - q[2] + q[3]);
    CHECK(q[0] != q[1]);
    CHECK(q[0] != q[3]);
    CHECK(in_block(q[0], 2));
    CHECK(phase_phi(q[0], q[1], q[2], q[3]) == 0);
  }
}

TEST_CASE("phase factors as 2 (n2 - n1) . (n2 - n3) on the plane n = n1 - n2 + n3") {
  for (const Quad& q : enumerate_S({4, 4, 2, 4}, 2)) {
    const Vec2i a = q[2] - q[1], b = q[2] - q[3];
    CHECK(phase_phi(q[0], q[1], q[2], q[3]) ==
          2 * (static_cast<long>(a.x()) * b.x() + static_cast<long>(a.y()) * b.y()));
  }
}

TEST_CASE("enumeration is symmetric under swapping the n1 and n3 blocks") {
  const DyadicTuple a{4, 2, 1, 4}, b{4, 4, 1, 2};
  for (long m : {-2L, 0L, 3L})
    CHECK(enumerate_S(a, m).size() == enumerate_S(b, m).size());
}

TEST_CASE("count_fixed maxima dominate and are attained") {
  const DyadicTuple t{2, 2, 2, 2};
  const long total = static_cast<long>(enumerate_S(t, 0).size());
  const FixedCount f1 = count_fixed(t, 0, {"n1"});
  CHECK(f1.max_count > 0);
  CHECK(f1.max_count <= total);
  REQUIRE(f1.argmax.size() == 1);
  // recount the argmax section by hand
  long by_hand = 0;
  for (const Quad& q : enumerate_S(t, 0))
    if (q[1] == f1.argmax[0]) ++by_hand;
  CHECK(by_hand == f1.max_count);
  const FixedCount f2 = count_fixed(t, 0, {"n1", "n3"});
  CHECK(f2.max_count <= f1.max_count);
  CHECK_THROWS(count_fixed(t, 0, {"bogus"}));
}

TEST_CASE("divisor_pairs against a direct double loop") {
  auto slow = [](long m, long a0, long M, long b0, long Nb) {
    long c = 0;
    for (long a = a0 - M; a <= a0 + M; ++a) {
      if (a == 0) continue;
      if (m % a != 0) continue;
      const long b = m / a;
      if (std::labs(b - b0) <= Nb) ++c;
    }
    return c;
  };
  for (long m : {1L, -6L, 12L, 36L, 97L})
    for (long a0 : {0L, 3L})
      CHECK(divisor_pairs(m, a0, 10, 0, 40) == slow(m, a0, 10, 0, 40));
  CHECK_THROWS(divisor_pairs(0, 0, 5, 0, 5));
}

TEST_CASE("counting_bound closed forms on the simple ids") {
  const DyadicTuple t{2, 4, 8, 16};
  const double eps = 0.25;
  CHECK(counting_bound("ii.f", t, eps) == doctest::Approx(8.0));
  CHECK(counting_bound("ii.h", t, eps) == doctest::Approx(4.0));
  CHECK(counting_bound("ii.i", t, eps) == doctest::Approx(2.0));
  CHECK(counting_bound("ii.k", t, eps) == doctest::Approx(2.0));
  CHECK(counting_bound("ii.g", t, eps) == doctest::Approx(std::pow(4.0, eps)));
  CHECK(counting_bound("ii.j", t, eps) == doctest::Approx(std::pow(2.0, eps)));
  for (const char* id : {"ii.a", "ii.b", "ii.c", "ii.d", "ii.e"})
    CHECK(counting_bound(id, t, eps) > 0.0);
  CHECK_THROWS(counting_bound("ii.z", t, eps));
}

TEST_CASE("counting sweep at cap 4: bounds hold and the partition identity is exact") {
  const CountSweepReport rep = verify_counting_bounds(4);
  CHECK(rep.partition_identity_ok);
  CHECK(rep.total_quadruples > 0);
  CHECK_FALSE(rep.rows.empty());
  for (const BoundRow& r : rep.rows) {
    CHECK(r.bound > 0.0);
    CHECK(r.ratio == doctest::Approx(r.worst_count / r.bound).epsilon(1e-12));
  }
  for (const auto& [id, c] : rep.fitted_constants) CHECK(c > 0.0);
  // the worst-m full count agrees with a direct enumeration
  for (const BoundRow& r : rep.rows)
    if (r.bound_id == "ii.a" && r.tuple == DyadicTuple{2, 2, 2, 2})
      CHECK(r.worst_count ==
            static_cast<long>(enumerate_S(r.tuple, r.worst_m).size()));
}

TEST_CASE("remark: dropping the exclusions breaks the ii.a shape") {
  const RemarkCounterexample rc = remark_counterexample(8);
  CHECK(rc.count_without_exclusions > rc.count_with_exclusions);
  CHECK(rc.ratio_without > 2.0);
  CHECK(static_cast<double>(rc.count_with_exclusions) / rc.iia_bound <
        rc.ratio_without);
}

TEST_CASE("dual vector lemma check is deterministic and finite") {
  const double a = dual_vector_bound_check(2, 16, 1.0, 50, 7);
  const double b = dual_vector_bound_check(2, 16, 1.0, 50, 7);
  CHECK(a == b);
  CHECK(a > 0.0);
  CHECK(std::isfinite(a));
  CHECK_THROWS(dual_vector_bound_check(4, 16, 1.0, 10, 7));
}
