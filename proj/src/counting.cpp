#include "wick2d/counting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wick2d/rng.hpp"

namespace wick2d {

std::string DyadicTuple::str() const {
  return "(" + std::to_string(N) + "," + std::to_string(N1) + "," +
         std::to_string(N2) + "," + std::to_string(N3) + ")";
}

namespace {

bool is_dyadic(int n) { return n >= 1 && (n & (n - 1)) == 0; }

void require_dyadic(const DyadicTuple& t, int cap) {
  for (int v : {t.N, t.N1, t.N2, t.N3}) {
    if (!is_dyadic(v)) throw std::invalid_argument("tuple entries must be dyadic");
    if (v > cap) throw std::invalid_argument("tuple exceeds enumeration cap");
  }
}

std::vector<Vec2i> block_points(int N) {
  std::vector<Vec2i> pts;
  for (const Vec2i& n : DiscIndex::get(N)->points())
    if (in_block(n, N)) pts.push_back(n);
  return pts;
}

constexpr long kMOffset = 4096;  // |phi| <= 2*16^2 = 512 at the desk cap

// quad packing: [m+kMOffset:13][n:10][n1:10][n2:10][n3:10]
inline std::uint64_t pack_quad(long m, int in, int i1, int i2, int i3) {
  return (static_cast<std::uint64_t>(m + kMOffset) << 40) |
         (static_cast<std::uint64_t>(in) << 30) |
         (static_cast<std::uint64_t>(i1) << 20) |
         (static_cast<std::uint64_t>(i2) << 10) | static_cast<std::uint64_t>(i3);
}

inline int quad_field(std::uint64_t q, int which) {  // 0=n,1=n1,2=n2,3=n3
  return static_cast<int>((q >> (30 - 10 * which)) & 0x3ff);
}
inline long quad_m(std::uint64_t q) {
  return static_cast<long>(q >> 40) - kMOffset;
}

// LSD radix sort on the low 33 bits (11-bit digits)
void radix_sort33(std::vector<std::uint64_t>& v, std::vector<std::uint64_t>& buf) {
  constexpr int kBits = 11;
  constexpr int kBuckets = 1 << kBits;
  buf.resize(v.size());
  std::vector<std::size_t> cnt(kBuckets);
  for (int pass = 0; pass < 3; ++pass) {
    const int shift = pass * kBits;
    std::fill(cnt.begin(), cnt.end(), 0);
    for (std::uint64_t x : v) ++cnt[(x >> shift) & (kBuckets - 1)];
    std::size_t run = 0;
    for (int b = 0; b < kBuckets; ++b) {
      const std::size_t c = cnt[b];
      cnt[b] = run;
      run += c;
    }
    for (std::uint64_t x : v) buf[cnt[(x >> shift) & (kBuckets - 1)]++] = x;
    v.swap(buf);
  }
}

// sort key (m, a, b) packed into 33 bits
inline std::uint64_t sort_key(std::uint64_t q, int a, int b) {
  return ((q >> 40) << 20) |
         (static_cast<std::uint64_t>(quad_field(q, a)) << 10) |
         static_cast<std::uint64_t>(quad_field(q, b));
}

struct ScanOut {
  long count_max = 0;       // max_m |S^m|
  long count_argm = 0;
  long single_max = 0;      // max over (m, a) sections
  long pair_max = 0;        // max over (m, a, b) sections
  long total = 0;           // sum over m (partition identity)
};

// one pass over keys sorted by (m, a, b)
ScanOut scan_sorted(const std::vector<std::uint64_t>& keys) {
  ScanOut out;
  std::size_t i = 0;
  const std::size_t n = keys.size();
  while (i < n) {
    const std::uint64_t m = keys[i] >> 20;
    long mc = 0;
    while (i < n && (keys[i] >> 20) == m) {
      const std::uint64_t ma = keys[i] >> 10;
      long ac = 0;
      while (i < n && (keys[i] >> 10) == ma) {
        const std::uint64_t mab = keys[i];
        long bc = 0;
        while (i < n && keys[i] == mab) {
          ++bc;
          ++i;
        }
        out.pair_max = std::max(out.pair_max, bc);
        ac += bc;
      }
      out.single_max = std::max(out.single_max, ac);
      mc += ac;
    }
    if (mc > out.count_max) {
      out.count_max = mc;
      out.count_argm = static_cast<long>(m) - kMOffset;
    }
    out.total += mc;
  }
  return out;
}

}  // namespace

std::vector<Quad> enumerate_S(const DyadicTuple& tuple, long m, int cap) {
  require_dyadic(tuple, cap);
  const auto p1 = block_points(tuple.N1);
  const auto p2 = block_points(tuple.N2);
  const auto p3 = block_points(tuple.N3);
  std::vector<Quad> out;
  for (const Vec2i& n1 : p1)
    for (const Vec2i& n2 : p2) {
      if (n1 == n2) continue;  // n = n3 exclusion
      const Vec2i d = n1 - n2;
      const long c = -norm2(n1) + norm2(n2);
      for (const Vec2i& n3 : p3) {
        if (n2 == n3) continue;  // n = n1 exclusion
        const Vec2i n = d + n3;
        if (!in_block(n, tuple.N)) continue;
        if (norm2(n) + c - norm2(n3) != m) continue;
        out.push_back({n, n1, n2, n3});
      }
    }
  std::sort(out.begin(), out.end(), [](const Quad& a, const Quad& b) {
    auto key = [](const Quad& q) {
      return std::array<int, 6>{q[0].x(), q[0].y(), q[1].x(),
                                q[1].y(), q[2].x(), q[2].y()};
    };
    return key(a) < key(b);
  });
  return out;
}

FixedCount count_fixed(const DyadicTuple& tuple, long m,
                       const std::vector<std::string>& fixed, int cap) {
  static const std::map<std::string, int> slot{{"n", 0}, {"n1", 1}, {"n2", 2}, {"n3", 3}};
  std::vector<int> idx;
  for (const auto& f : fixed) {
    auto it = slot.find(f);
    if (it == slot.end()) throw std::invalid_argument("count_fixed: unknown frequency " + f);
    idx.push_back(it->second);
  }
  const auto quads = enumerate_S(tuple, m, cap);
  std::map<std::vector<int>, long> sections;
  for (const Quad& q : quads) {
    std::vector<int> key;
    for (int i : idx) {
      key.push_back(q[i].x());
      key.push_back(q[i].y());
    }
    ++sections[key];
  }
  FixedCount fc;
  if (idx.empty()) {  // nothing fixed: the full count
    fc.max_count = static_cast<long>(quads.size());
    return fc;
  }
  for (const auto& [key, c] : sections)
    if (c > fc.max_count) {
      fc.max_count = c;
      fc.argmax.clear();
      for (std::size_t i = 0; i + 1 < key.size(); i += 2)
        fc.argmax.emplace_back(key[i], key[i + 1]);
    }
  return fc;
}

long divisor_pairs(long m, long a0, long M, long b0, long Nb) {
  if (m == 0) throw std::invalid_argument("divisor_pairs: m must be nonzero");
  const long am = std::labs(m);
  long count = 0;
  for (long d = 1; d * d <= am; ++d) {
    if (am % d != 0) continue;
    const long e = am / d;
    // signed pairs (a,b) with ab = m built from the unsigned divisor pair
    std::vector<std::pair<long, long>> cands;
    for (long a : {d, -d, e, -e}) {
      const long b = m / a;
      cands.emplace_back(a, b);
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (auto [a, b] : cands)
      if (std::labs(a - a0) <= M && std::labs(b - b0) <= Nb) ++count;
  }
  return count;
}

double counting_bound(const std::string& id, const DyadicTuple& t, double eps) {
  const double N = t.N, N1 = t.N1, N2 = t.N2, N3 = t.N3;
  auto mn = [](double a, double b) { return std::min(a, b); };
  auto pw = [](double x, double e) { return std::pow(x, e); };
  if (id == "ii.a")
    return std::min({N1 * N1 * N3 * N3 * pw(mn(N, N2), eps),
                     N * N * N2 * N2 * pw(mn(N1, N3), eps),
                     mn(N, N2) * mn(N, N2) * pw(N1 * N3, 1.0 + eps),
                     mn(N1, N3) * mn(N1, N3) * pw(N * N2, 1.0 + eps)});
  if (id == "ii.b")
    return std::min({N2 * N2 * pw(mn(N1, N3), eps), pw(N1 * N2, 1.0 + eps),
                     pw(N1 * N3, 1.0 + eps), pw(N2 * N3, 1.0 + eps)});
  if (id == "ii.c")
    return std::min({N3 * N3 * pw(mn(N, N2), eps), pw(N * N2, 1.0 + eps),
                     pw(N * N3, 1.0 + eps), pw(N2 * N3, 1.0 + eps)});
  if (id == "ii.d")
    return std::min({N * N * pw(mn(N1, N3), eps), pw(N * N1, 1.0 + eps),
                     pw(N * N3, 1.0 + eps), pw(N1 * N3, 1.0 + eps)});
  if (id == "ii.e")
    return std::min({N1 * N1 * pw(mn(N, N2), eps), pw(N * N1, 1.0 + eps),
                     pw(N * N2, 1.0 + eps), pw(N1 * N2, 1.0 + eps)});
  if (id == "ii.f") return mn(N2, N3);
  if (id == "ii.g") return pw(mn(N1, N3), eps);
  if (id == "ii.h") return mn(N1, N2);
  if (id == "ii.i") return mn(N, N3);
  if (id == "ii.j") return pw(mn(N, N2), eps);
  if (id == "ii.k") return mn(N, N1);
  throw std::invalid_argument("counting_bound: unknown bound id " + id);
}

CountSweepReport verify_counting_bounds(int max_dyadic, double eps) {
  if (max_dyadic > 16 || !is_dyadic(max_dyadic))
    throw std::invalid_argument("verify_counting_bounds: cap is dyadic <= 16");

  std::vector<int> blocks;
  for (int b = 1; b <= max_dyadic; b *= 2) blocks.push_back(b);
  const int nb = static_cast<int>(blocks.size());
  const auto disc = DiscIndex::get(max_dyadic);

  // per-block point lists carrying global ids and cached norms
  struct Pt {
    int x, y, id;
    long q;
  };
  std::vector<std::vector<Pt>> pl(nb);
  for (int bi = 0; bi < nb; ++bi)
    for (const Vec2i& n : block_points(blocks[bi]))
      pl[bi].push_back({n.x(), n.y(), disc->find(n), norm2(n)});

  CountSweepReport rep;
  rep.max_dyadic = max_dyadic;
  rep.eps = eps;

  static const char* kBoundIds[11] = {"ii.a", "ii.b", "ii.c", "ii.d", "ii.e", "ii.f",
                                      "ii.g", "ii.h", "ii.i", "ii.j", "ii.k"};

  // sort orders: (a,b) pairs covering all single and pair sections
  // order:         (n,n1)  (n1,n2) (n2,n3) (n3,n)  (n,n2)  (n1,n3)
  const int ord_a[6] = {0, 1, 2, 3, 0, 1};
  const int ord_b[6] = {1, 2, 3, 0, 2, 3};

  std::vector<std::vector<std::uint64_t>> bucket(nb);
  std::vector<std::uint64_t> keys, buf;

  for (int b1 = 0; b1 < nb; ++b1)
    for (int b2 = 0; b2 < nb; ++b2) {
      for (auto& bk : bucket) bk.clear();
      for (int b3 = 0; b3 < nb; ++b3) {
        for (const Pt& p1 : pl[b1])
          for (const Pt& p2 : pl[b2]) {
            if (p1.x == p2.x && p1.y == p2.y) continue;  // n = n3 exclusion
            const int dx = p1.x - p2.x, dy = p1.y - p2.y;
            const long c = -p1.q + p2.q;
            for (const Pt& p3 : pl[b3]) {
              if (p2.x == p3.x && p2.y == p3.y) continue;  // n = n1 exclusion
              const int nx = dx + p3.x, ny = dy + p3.y;
              if (nx < -max_dyadic || nx > max_dyadic || ny < -max_dyadic ||
                  ny > max_dyadic)
                continue;
              const int id = disc->find(Vec2i(nx, ny));
              if (id < 0) continue;
              const long qn = static_cast<long>(nx) * nx + static_cast<long>(ny) * ny;
              const long m = qn + c - p3.q;
              const int bn = [&] {
                int k = 0;
                long hi = 1;
                while (hi * hi < qn) {
                  hi *= 2;
                  ++k;
                }
                return qn <= 1 ? 0 : k;
              }();
              bucket[bn].push_back(pack_quad(m, id, p1.id, p2.id, p3.id));
            }
          }
        // buckets currently hold quads for (all N, N1=b1, N2=b2, N3=b3)
        for (int bn = 0; bn < nb; ++bn) {
          auto& qs = bucket[bn];
          const DyadicTuple tuple{blocks[bn], blocks[b1], blocks[b2], blocks[b3]};
          rep.total_quadruples += static_cast<long>(qs.size());

          SectionMaxima sm;
          long count_argm = 0;
          for (int o = 0; o < 6; ++o) {
            keys.resize(qs.size());
            for (std::size_t i = 0; i < qs.size(); ++i)
              keys[i] = sort_key(qs[i], ord_a[o], ord_b[o]);
            radix_sort33(keys, buf);
            const ScanOut so = scan_sorted(keys);
            if (o == 0) {
              sm.count = so.count_max;
              count_argm = so.count_argm;
              if (so.total != static_cast<long>(qs.size()))
                rep.partition_identity_ok = false;
            }
            switch (o) {  // map scan output to sections
              case 0:
                sm.single[0] = so.single_max;  // {n}
                sm.pair[0] = so.pair_max;      // {nn1}
                break;
              case 1:
                sm.single[1] = so.single_max;  // {n1}
                sm.pair[3] = so.pair_max;      // {n1n2}
                break;
              case 2:
                sm.single[2] = so.single_max;  // {n2}
                sm.pair[5] = so.pair_max;      // {n2n3}
                break;
              case 3:
                sm.single[3] = so.single_max;  // {n3}
                sm.pair[2] = so.pair_max;      // {nn3}
                break;
              case 4:
                sm.pair[1] = so.pair_max;  // {nn2}
                break;
              case 5:
                sm.pair[4] = so.pair_max;  // {n1n3}
                break;
            }
          }
          qs.clear();
          qs.shrink_to_fit();

          const long quantities[11] = {sm.count,    sm.single[0], sm.single[1],
                                       sm.single[2], sm.single[3], sm.pair[0],
                                       sm.pair[1],  sm.pair[2],   sm.pair[3],
                                       sm.pair[4],  sm.pair[5]};
          const bool half = tuple.N <= max_dyadic / 2 && tuple.N1 <= max_dyadic / 2 &&
                            tuple.N2 <= max_dyadic / 2 && tuple.N3 <= max_dyadic / 2;
          for (int bi = 0; bi < 11; ++bi) {
            BoundRow row;
            row.tuple = tuple;
            row.bound_id = kBoundIds[bi];
            row.worst_count = quantities[bi];
            row.worst_m = count_argm;
            row.bound = counting_bound(row.bound_id, tuple, eps);
            row.ratio = quantities[bi] / row.bound;
            auto& fc = rep.fitted_constants[row.bound_id];
            fc = std::max(fc, row.ratio);
            if (half) {
              auto& fh = rep.fitted_constants_half[row.bound_id];
              fh = std::max(fh, row.ratio);
            }
            rep.rows.push_back(row);
          }
        }
      }
    }
  return rep;
}

RemarkCounterexample remark_counterexample(int big, double eps) {
  RemarkCounterexample rc;
  rc.tuple = {big, big, 1, 1};
  const auto p1 = block_points(big);
  const auto p2 = block_points(1);
  const auto p3 = block_points(1);
  for (const Vec2i& n1 : p1)
    for (const Vec2i& n2 : p2)
      for (const Vec2i& n3 : p3) {
        const Vec2i n = n1 - n2 + n3;
        if (!in_block(n, big)) continue;
        if (phase_phi(n, n1, n2, n3) != 0) continue;
        ++rc.count_without_exclusions;
        if (n1 != n2 && n2 != n3) ++rc.count_with_exclusions;
      }
  rc.iia_bound = counting_bound("ii.a", rc.tuple, eps);
  rc.ratio_without = rc.count_without_exclusions / rc.iia_bound;
  return rc;
}

double dual_vector_bound_check(int r, int N, double a1, int trials,
                               std::uint64_t seed) {
  if (r < 1 || r > 3) throw std::invalid_argument("dual_vector_bound_check: r <= 3");
  const double rhs = std::pow(static_cast<double>(N), static_cast<double>(r) * a1);
  const double level = std::pow(static_cast<double>(N), a1);
  double worst = 0.0;
  std::uint64_t ctr = 0;
  auto draw_coord = [&](std::uint64_t s) {
    // uniform integer in [-N, N]
    const std::uint64_t bits = rng::hash3(s, ctr++, 0xbe5466cf34e90c6cULL);
    return static_cast<int>(bits % (2 * static_cast<std::uint64_t>(N) + 1)) - N;
  };
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = rng::derive_seed(seed, static_cast<std::uint64_t>(t));
    Eigen::MatrixXd A(r, r);
    // rejection: rows inside the Euclidean ball, matrix nonsingular
    for (int attempts = 0;; ++attempts) {
      if (attempts > 10000)
        throw std::runtime_error("dual_vector_bound_check: rejection stalled");
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) A(i, j) = draw_coord(s);
      bool ok = true;
      for (int i = 0; i < r; ++i)
        if (A.row(i).norm() > N) ok = false;
      if (!ok) continue;
      if (std::abs(A.determinant()) < 0.5) continue;  // integer det: 0 or >= 1
      break;
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    for (int corner = 0; corner < (1 << r); ++corner) {
      Eigen::VectorXd sgn(r);
      for (int i = 0; i < r; ++i) sgn[i] = (corner >> i) & 1 ? level : -level;
      const Eigen::VectorXd y = lu.solve(sgn);
      worst = std::max(worst, y.norm() / rhs);
    }
  }
  return worst;
}

}  // namespace wick2d
