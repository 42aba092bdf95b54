#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wick2d/disc.hpp"

namespace wick2d {

struct DyadicTuple {
  int N = 1, N1 = 1, N2 = 1, N3 = 1;

  // decreasing rearrangement of (N1, N2, N3)
  int n_max() const { return std::max({N1, N2, N3}); }
  int n_min() const { return std::min({N1, N2, N3}); }
  int n_med() const { return N1 + N2 + N3 - n_max() - n_min(); }
  bool operator<(const DyadicTuple& o) const {
    return std::tie(N, N1, N2, N3) < std::tie(o.N, o.N1, o.N2, o.N3);
  }
  bool operator==(const DyadicTuple& o) const {
    return N == o.N && N1 == o.N1 && N2 == o.N2 && N3 == o.N3;
  }
  std::string str() const;
};

using Quad = std::array<Vec2i, 4>;  // (n, n1, n2, n3)

// phi(n-bar) = |n|^2 - |n1|^2 + |n2|^2 - |n3|^2
inline long phase_phi(const Vec2i& n, const Vec2i& n1, const Vec2i& n2, const Vec2i& n3) {
  return norm2(n) - norm2(n1) + norm2(n2) - norm2(n3);
}

// All quadruples of S^{N,(m)} in lexicographic order on (n, n1, n2).
std::vector<Quad> enumerate_S(const DyadicTuple& tuple, long m, int cap = 16);

// Per-(tuple, m) data gathered by the sweep.
struct SectionMaxima {
  long count = 0;                   // |S^{N,(m)}|
  std::array<long, 4> single{};     // max section with {n},{n1},{n2},{n3} fixed
  std::array<long, 6> pair{};       // {nn1},{nn2},{nn3},{n1n2},{n1n3},{n2n3}
};

static constexpr const char* kPairNames[6] = {"nn1", "nn2", "nn3",
                                              "n1n2", "n1n3", "n2n3"};

// max over fixed values of the section count (fixed = named subset)
struct FixedCount {
  long max_count = 0;
  std::vector<Vec2i> argmax;  // the fixed frequencies attaining the max
};
FixedCount count_fixed(const DyadicTuple& tuple, long m,
                       const std::vector<std::string>& fixed, int cap = 16);

// integer pairs (a,b), ab = m, |a - a0| <= M, |b - b0| <= Nb
long divisor_pairs(long m, long a0, long M, long b0, long Nb);

// the eleven bounds (ii.a)-(ii.k) at a given eps
double counting_bound(const std::string& bound_id, const DyadicTuple& t, double eps);

struct BoundRow {
  DyadicTuple tuple;
  std::string bound_id;
  long worst_count = 0;   // max over m of the bounded quantity
  long worst_m = 0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct CountSweepReport {
  int max_dyadic = 0;
  double eps = 0.25;
  std::vector<BoundRow> rows;
  std::map<std::string, double> fitted_constants;      // per bound id, full sweep
  std::map<std::string, double> fitted_constants_half; // entries <= max_dyadic/2
  bool partition_identity_ok = true;
  long total_quadruples = 0;
};

CountSweepReport verify_counting_bounds(int max_dyadic, double eps = 0.25);

// Remark check: dropping the exclusions n != n1, n3 at N ~ N1 >> N2 ~ N3,
// m = 0 inflates the count past the (ii.a) shape.
struct RemarkCounterexample {
  DyadicTuple tuple;
  long count_with_exclusions = 0;
  long count_without_exclusions = 0;
  double iia_bound = 0.0;
  double ratio_without = 0.0;  // count_without / bound
};
RemarkCounterexample remark_counterexample(int big = 16, double eps = 0.25);

// Appendix dual-vector lemma at small rank: max over trials of |y| / N^{C a1}
// with C = r, y ranging over the corners A^{-1} s, s in {+-N^{a1}}^r.
double dual_vector_bound_check(int r, int N, double a1, int trials,
                               std::uint64_t seed);

}  // namespace wick2d
