// Sparse tensors, matricization norms, Schur and Hilbert-Schmidt bounds, and
// the Lanczos singular-value solver.
#include <doctest.h>

#include <Eigen/SVD>
#include <map>

#include "wick2d/rng.hpp"
#include "wick2d/tensor.hpp"

using namespace wick2d;

namespace {

// independent dense matricization + SVD reference
double svd_partition_norm(const SparseTensor& h, const Partition& p) {
  auto key_of = [&](const TensorKey& full, const std::vector<std::string>& axes) {
    TensorKey k;
    for (const auto& a : axes) k.push_back(full[h.axis_index(a)]);
    return k;
  };
  std::map<TensorKey, int, TensorKeyLess> rows, cols;
  for (const auto& [k, v] : h.entries()) {
    rows.emplace(key_of(k, p.C), static_cast<int>(rows.size()));
    cols.emplace(key_of(k, p.B), static_cast<int>(cols.size()));
  }
  if (rows.empty()) return 0.0;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<int>(rows.size()),
                                              static_cast<int>(cols.size()));
  for (const auto& [k, v] : h.entries())
    M(rows.at(key_of(k, p.C)), cols.at(key_of(k, p.B))) += v;
  return Eigen::BDCSVD<Eigen::MatrixXcd>(M).singularValues()(0);
}

SparseTensor random_tensor_4(int radius, int entries, std::uint64_t seed) {
  SparseTensor h({"n", "n1", "n2", "n3"});
  const auto d = DiscIndex::get(radius);
  for (int i = 0; i < entries; ++i) {
    TensorKey key;
    for (int a = 0; a < 4; ++a) {
      const auto bits = rng::hash3(seed, static_cast<std::uint64_t>(i), a);
      key.push_back(d->point(static_cast<int>(bits % d->size())));
    }
    h.set(key, rng::complex_gaussian(seed, 1000 + i));
  }
  return h;
}

}  // namespace

TEST_CASE("SparseTensor set/at semantics") {
  SparseTensor h({"a", "b"});
  const TensorKey k{Vec2i(0, 1), Vec2i(2, -1)};
  CHECK(h.at(k) == cd(0.0, 0.0));
  h.set(k, cd(1.5, -2.0));
  CHECK(h.at(k) == cd(1.5, -2.0));
  h.set(k, cd(0.0, 0.0));  // zero erases
  CHECK(h.entries().empty());
  CHECK(h.axis_index("b") == 1);
  CHECK_THROWS(h.axis_index("c"));
  h.set(k, cd(0.0, 3.0));
  const SparseTensor hc = h.conjugate();
  CHECK(hc.at(k) == cd(0.0, -3.0));
}

TEST_CASE("partition norms of explicit matrices") {
  SparseTensor id({"r", "c"});
  for (int i = 0; i < 4; ++i)
    id.set({Vec2i(i, 0), Vec2i(i, 0)}, cd(1.0, 0.0));
  CHECK(partition_norm(id, {{"c"}, {"r"}}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hilbert_schmidt(id) == doctest::Approx(2.0).epsilon(1e-12));

  SparseTensor ones({"r", "c"});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      ones.set({Vec2i(i, 0), Vec2i(j, 0)}, cd(1.0, 0.0));
  CHECK(partition_norm(ones, {{"c"}, {"r"}}) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(schur_bound(ones, {{"c"}, {"r"}}) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("partition_norm agrees with a dense SVD on the base tensor") {
  const SparseTensor h = base_tensor({{2, 2, 2, 2}, 0});
  CHECK_FALSE(h.entries().empty());
  for (const char* label : kBasePartitions) {
    // split "B->C" into axis lists
    const std::string s(label);
    const auto arrow = s.find("->");
    auto axes_of = [](const std::string& part) {
      std::vector<std::string> axes;
      for (std::size_t i = 0; i < part.size();) {
        std::size_t len = 1;
        if (i + 1 < part.size() && std::isdigit(part[i + 1])) len = 2;
        axes.push_back(part.substr(i, len));
        i += len;
      }
      return axes;
    };
    const Partition p{axes_of(s.substr(0, arrow)), axes_of(s.substr(arrow + 2))};
    const double exact = partition_norm(h, p);
    CHECK(exact == doctest::Approx(svd_partition_norm(h, p)).epsilon(1e-9));
    // duality: transposing the partition preserves the norm
    CHECK(partition_norm(h, {p.C, p.B}) == doctest::Approx(exact).epsilon(1e-9));
    // domination by the Schur and Hilbert-Schmidt bounds
    CHECK(exact <= schur_bound(h, p) * (1.0 + 1e-12));
    CHECK(exact <= hilbert_schmidt(h) * (1.0 + 1e-12));
  }
}

TEST_CASE("norms scale linearly with the entries") {
  SparseTensor h = random_tensor_4(2, 30, 5);
  const Partition p{{"n1", "n2"}, {"n", "n3"}};
  const double e = partition_norm(h, p);
  const double sb = schur_bound(h, p);
  SparseTensor h2({"n", "n1", "n2", "n3"});
  for (const auto& [k, v] : h.entries()) h2.set(k, cd(2.5, 0.0) * v);
  CHECK(partition_norm(h2, p) == doctest::Approx(2.5 * e).epsilon(1e-10));
  CHECK(schur_bound(h2, p) == doctest::Approx(2.5 * sb).epsilon(1e-12));
  CHECK(hilbert_schmidt(h2) == doctest::Approx(2.5 * hilbert_schmidt(h)).epsilon(1e-12));
}

TEST_CASE("empty-side partitions reduce to the Hilbert-Schmidt norm") {
  const SparseTensor h = random_tensor_4(2, 20, 9);
  CHECK(partition_norm(h, {{}, {"n", "n1", "n2", "n3"}}) ==
        doctest::Approx(hilbert_schmidt(h)).epsilon(1e-10));
  CHECK(partition_norm(h, {{"n", "n1", "n2", "n3"}, {}}) ==
        doctest::Approx(hilbert_schmidt(h)).epsilon(1e-10));
}

TEST_CASE("sigma_max_lanczos matches BDCSVD on a random rectangular matrix") {
  const int rows = 40, cols = 25;
  Eigen::MatrixXcd M(rows, cols);
  std::vector<Triplet> trips;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const cd v = rng::complex_gaussian(77, static_cast<std::uint64_t>(r * cols + c));
      M(r, c) = v;
      trips.push_back({r, c, v});
    }
  const double want = Eigen::BDCSVD<Eigen::MatrixXcd>(M).singularValues()(0);
  CHECK(sigma_max_lanczos(trips, rows, cols) == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("base tensor report at cap 4: chain, bounds, and duality") {
  const BaseTensorReport rep = verify_base_tensor_bounds(4);
  CHECK(rep.chain_ok);
  CHECK(rep.max_duality_gap <= 1e-10);
  CHECK_FALSE(rep.rows.empty());
  for (const BaseBoundRow& r : rep.rows) {
    CHECK(r.exact <= r.schur * (1.0 + 1e-12));
    CHECK(r.exact <= r.hs * (1.0 + 1e-12));
    CHECK(r.paper_bound > 0.0);
  }
  CHECK(rep.fitted_constants.size() == 7);
}
