#include "wick2d/tensor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace wick2d {

int SparseTensor::axis_index(const std::string& name) const {
  for (std::size_t i = 0; i < axes_.size(); ++i)
    if (axes_[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("SparseTensor: unknown axis " + name);
}

void SparseTensor::set(const TensorKey& key, cd value) {
  if (key.size() != axes_.size())
    throw std::invalid_argument("SparseTensor::set: key arity mismatch");
  if (value == cd(0.0, 0.0))
    entries_.erase(key);
  else
    entries_[key] = value;
}

cd SparseTensor::at(const TensorKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? cd(0.0, 0.0) : it->second;
}

SparseTensor SparseTensor::conjugate() const {
  SparseTensor out(axes_);
  for (const auto& [k, v] : entries_) out.set(k, std::conj(v));
  return out;
}

SparseTensor base_tensor(const BaseTensorSpec& spec, int cap) {
  SparseTensor h({"n", "n1", "n2", "n3"});
  for (const Quad& q : enumerate_S(spec.tuple, spec.m, cap))
    h.set({q[0], q[1], q[2], q[3]}, cd(1.0, 0.0));
  return h;
}

namespace {

struct Matricization {
  std::vector<Triplet> triplets;
  int rows = 0, cols = 0;
};

std::vector<int> axis_indices(const SparseTensor& h, const std::vector<std::string>& names) {
  std::vector<int> idx;
  for (const auto& s : names) idx.push_back(h.axis_index(s));
  return idx;
}

void validate_partition(const SparseTensor& h, const Partition& p) {
  std::set<std::string> seen;
  for (const auto& s : p.B) seen.insert(s);
  for (const auto& s : p.C)
    if (!seen.insert(s).second)
      throw std::invalid_argument("Partition: axes not disjoint");
  if (seen.size() != h.axes().size())
    throw std::invalid_argument("Partition: B and C must cover the axes");
  for (const auto& s : h.axes())
    if (!seen.count(s)) throw std::invalid_argument("Partition: missing axis " + s);
}

// rows indexed by sorted distinct C-subkeys, columns by B-subkeys
Matricization matricize(const SparseTensor& h, const Partition& p) {
  const auto bi = axis_indices(h, p.B);
  const auto ci = axis_indices(h, p.C);
  auto subkey = [](const TensorKey& key, const std::vector<int>& idx) {
    TensorKey out;
    for (int i : idx) out.push_back(key[i]);
    return out;
  };
  std::map<TensorKey, int, TensorKeyLess> rid, cid;
  for (const auto& [k, v] : h.entries()) {
    rid.emplace(subkey(k, ci), 0);
    cid.emplace(subkey(k, bi), 0);
  }
  int r = 0, c = 0;
  for (auto& [k, id] : rid) id = r++;
  for (auto& [k, id] : cid) id = c++;
  Matricization m;
  m.rows = r;
  m.cols = c;
  for (const auto& [k, v] : h.entries())
    m.triplets.push_back({rid.at(subkey(k, ci)), cid.at(subkey(k, bi)), v});
  return m;
}

double dense_sigma_max(const Matricization& m) {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(m.rows, m.cols);
  for (const Triplet& t : m.triplets) A(t.row, t.col) += t.value;
  return Eigen::BDCSVD<Eigen::MatrixXcd>(A).singularValues()(0);
}

double power_sigma_max(const Matricization& m) {
  const int cap = 10000;
  const double rel_tol = 1e-10;
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(m.cols);
  v /= v.norm();
  Eigen::VectorXcd u(m.rows);
  double prev = 0.0;
  for (int it = 1; it <= cap; ++it) {
    u.setZero();
    for (const Triplet& t : m.triplets) u[t.row] += t.value * v[t.col];
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(m.cols);
    for (const Triplet& t : m.triplets) w[t.col] += std::conj(t.value) * u[t.row];
    const double nw = w.norm();
    if (nw == 0.0) {
      // deterministic perturbation if the start was orthogonal to the range
      for (int i = 0; i < m.cols; ++i) v[i] = cd(1.0 + 1e-3 * (i % 7), 1e-3 * (i % 5));
      v /= v.norm();
      prev = 0.0;
      continue;
    }
    const double est = std::sqrt(nw);  // Rayleigh quotient for h^H h
    v = w / nw;
    if (it > 1 && std::abs(est - prev) <= rel_tol * std::max(est, 1e-300)) return est;
    prev = est;
  }
  throw std::runtime_error("partition_norm: power iteration did not converge; last bound " +
                           std::to_string(prev));
}

}  // namespace

double hilbert_schmidt(const SparseTensor& h) {
  double acc = 0.0;
  for (const auto& [k, v] : h.entries()) acc += std::norm(v);
  return std::sqrt(acc);
}

double partition_norm(const SparseTensor& h, const Partition& p) {
  validate_partition(h, p);
  if (h.entries().empty()) return 0.0;
  if (p.B.empty() || p.C.empty()) return hilbert_schmidt(h);
  const Matricization m = matricize(h, p);
  return std::max(m.rows, m.cols) <= 2000 ? dense_sigma_max(m) : power_sigma_max(m);
}

double schur_bound(const SparseTensor& h, const Partition& p) {
  validate_partition(h, p);
  if (h.entries().empty()) return 0.0;
  if (p.B.empty() || p.C.empty()) return hilbert_schmidt(h);
  const Matricization m = matricize(h, p);
  std::vector<double> row(m.rows, 0.0), col(m.cols, 0.0);
  for (const Triplet& t : m.triplets) {
    row[t.row] += std::abs(t.value);
    col[t.col] += std::abs(t.value);
  }
  return std::sqrt(*std::max_element(row.begin(), row.end()) *
                   *std::max_element(col.begin(), col.end()));
}

double sigma_max_lanczos(const std::vector<Triplet>& t, int rows, int cols,
                         double rel_tol) {
  if (t.empty() || rows == 0 || cols == 0) return 0.0;
  const int kmax = std::min(std::min(rows, cols), 300);
  std::vector<Eigen::VectorXcd> U, V;  // grown lazily (cols may be huge)
  std::vector<double> alpha, beta;

  auto apply = [&](const Eigen::VectorXcd& x) {
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(rows);
    for (const Triplet& tr : t) y[tr.row] += tr.value * x[tr.col];
    return y;
  };
  auto apply_h = [&](const Eigen::VectorXcd& x) {
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(cols);
    for (const Triplet& tr : t) y[tr.col] += std::conj(tr.value) * x[tr.row];
    return y;
  };
  auto tridiag_sigma = [&](int k) {
    // singular values of the (k+1) x k lower bidiagonal via B^T B eigenvalues
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      M(i, i) = alpha[i] * alpha[i] + beta[i] * beta[i];
      if (i + 1 < k) M(i, i + 1) = M(i + 1, i) = alpha[i + 1] * beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  };

  auto orth = [](const std::vector<Eigen::VectorXcd>& basis, Eigen::VectorXcd& x) {
    for (const auto& q : basis) x -= q.dot(x) * q;
  };

  Eigen::VectorXcd u = Eigen::VectorXcd::Ones(rows);
  u /= u.norm();
  U.push_back(u);
  double prev = 0.0;
  for (int k = 0; k < kmax; ++k) {
    Eigen::VectorXcd v = apply_h(U[k]);
    if (k > 0) v -= beta[k - 1] * V[k - 1];
    orth(V, v);  // full reorthogonalization
    double a = v.norm();
    if (a < 1e-14) {
      // invariant subspace reached; deterministic restart direction
      for (int i = 0; i < cols; ++i) v[i] = cd(1.0 + (i % 3), (i % 5) * 0.5);
      orth(V, v);
      a = v.norm();
      if (a < 1e-14) break;
      v /= a;
      a = 0.0;
    } else {
      v /= a;
    }
    alpha.push_back(a);
    V.push_back(v);

    Eigen::VectorXcd un = apply(v) - a * U[k];
    orth(U, un);
    double b = un.norm();
    if (b < 1e-14) {
      beta.push_back(0.0);
      break;
    }
    beta.push_back(b);
    U.push_back(un / b);

    if ((k + 1) % 5 == 0 || k + 1 == kmax) {
      const double est = tridiag_sigma(k + 1);
      if (k > 5 && std::abs(est - prev) <= rel_tol * std::max(est, 1e-300)) return est;
      prev = est;
    }
  }
  return tridiag_sigma(static_cast<int>(alpha.size()));
}

double base_tensor_bound(const std::string& partition, const DyadicTuple& t,
                         double eps) {
  const double N = t.N, N1 = t.N1, N2 = t.N2, N3 = t.N3;
  const double Nmed = t.n_med(), Nmin = t.n_min();
  auto mn = [](double a, double b) { return std::min(a, b); };
  auto pw = [](double x, double e) { return std::pow(x, e); };
  if (partition == "n1n2n3->n")
    return std::min(N2 * pw(mn(N1, N3), eps), pw(Nmed * Nmin, 0.5 + eps));
  if (partition == "n1->nn2n3")
    return std::min({N3 * pw(mn(N, N2), eps), pw(N * N2, 0.5 + eps),
                     pw(N * N3, 0.5 + eps), pw(N2 * N3, 0.5 + eps)});
  if (partition == "n2->nn1n3")
    return std::min({N * pw(mn(N1, N3), eps), pw(N * N1, 0.5 + eps),
                     pw(N * N3, 0.5 + eps), pw(N1 * N3, 0.5 + eps)});
  if (partition == "n3->nn1n2")
    return std::min({N1 * pw(mn(N, N2), eps), pw(N * N1, 0.5 + eps),
                     pw(N * N2, 0.5 + eps), pw(N1 * N2, 0.5 + eps)});
  if (partition == "n2n3->nn1") return pw(mn(N, N1), 0.5) * pw(mn(N2, N3), 0.5);
  if (partition == "n1n3->nn2") return pw(mn(N, N2), eps) * pw(mn(N1, N3), eps);
  if (partition == "n1n2->nn3") return pw(mn(N, N3), 0.5) * pw(mn(N1, N2), 0.5);
  throw std::invalid_argument("base_tensor_bound: unknown partition " + partition);
}

namespace {

// packed quad with precomputed section subkeys per partition
struct PackedQuad {
  std::array<Vec2i, 4> pts;  // n, n1, n2, n3
};

// axis index lists for the seven partitions, as (B, C) over (0=n,1=n1,2=n2,3=n3)
const std::vector<std::pair<std::vector<int>, std::vector<int>>> kPartAxes = {
    {{1, 2, 3}, {0}}, {{1}, {0, 2, 3}}, {{2}, {0, 1, 3}}, {{3}, {0, 1, 2}},
    {{2, 3}, {0, 1}}, {{1, 3}, {0, 2}}, {{1, 2}, {0, 3}}};

std::uint64_t subkey_id(const PackedQuad& q, const std::vector<int>& idx,
                        std::map<std::array<int, 6>, int>& dict) {
  std::array<int, 6> key;
  key.fill(1 << 20);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    key[2 * i] = q.pts[idx[i]].x();
    key[2 * i + 1] = q.pts[idx[i]].y();
  }
  auto [it, fresh] = dict.emplace(key, static_cast<int>(dict.size()));
  return it->second;
}

}  // namespace

BaseTensorReport verify_base_tensor_bounds(int max_dyadic, double eps) {
  if (max_dyadic > 8) throw std::invalid_argument("verify_base_tensor_bounds: cap is 8");
  BaseTensorReport rep;
  rep.max_dyadic = max_dyadic;
  rep.eps = eps;

  std::vector<int> blocks;
  for (int b = 1; b <= max_dyadic; b *= 2) blocks.push_back(b);
  std::vector<std::vector<Vec2i>> pl;
  for (int b : blocks) {
    std::vector<Vec2i> pts;
    for (const Vec2i& n : DiscIndex::get(b)->points())
      if (in_block(n, b)) pts.push_back(n);
    pl.push_back(std::move(pts));
  }

  const double chain_tol = 1e-9;
  for (std::size_t b1 = 0; b1 < blocks.size(); ++b1)
    for (std::size_t b2 = 0; b2 < blocks.size(); ++b2)
      for (std::size_t b3 = 0; b3 < blocks.size(); ++b3) {
        // group the support by (N, m)
        std::map<std::pair<int, long>, std::vector<PackedQuad>> groups;
        for (const Vec2i& n1 : pl[b1])
          for (const Vec2i& n2 : pl[b2]) {
            if (n1 == n2) continue;
            const Vec2i d = n1 - n2;
            const long c = -norm2(n1) + norm2(n2);
            for (const Vec2i& n3 : pl[b3]) {
              if (n2 == n3) continue;
              const Vec2i n = d + n3;
              const int bn = dyadic_block(n);
              if (bn > max_dyadic) continue;
              const long m = norm2(n) + c - norm2(n3);
              groups[{bn, m}].push_back({{n, n1, n2, n3}});
            }
          }
        for (const auto& [key, quads] : groups) {
          const DyadicTuple tuple{key.first, blocks[b1], blocks[b2], blocks[b3]};
          const long m = key.second;
          const double hs = std::sqrt(static_cast<double>(quads.size()));
          for (int pi = 0; pi < 7; ++pi) {
            std::map<std::array<int, 6>, int> bdict, cdict;
            std::vector<Triplet> trips;
            std::vector<double> rowsum, colsum;
            for (const PackedQuad& q : quads) {
              const int r = static_cast<int>(subkey_id(q, kPartAxes[pi].second, cdict));
              const int c = static_cast<int>(subkey_id(q, kPartAxes[pi].first, bdict));
              trips.push_back({r, c, cd(1.0, 0.0)});
              if (r >= static_cast<int>(rowsum.size())) rowsum.resize(r + 1, 0.0);
              if (c >= static_cast<int>(colsum.size())) colsum.resize(c + 1, 0.0);
              rowsum[r] += 1.0;
              colsum[c] += 1.0;
            }
            const int rows = static_cast<int>(cdict.size());
            const int cols = static_cast<int>(bdict.size());
            const double exact = sigma_max_lanczos(trips, rows, cols);
            // duality: the transposed matricization computed independently
            std::vector<Triplet> tt;
            tt.reserve(trips.size());
            for (const Triplet& t : trips) tt.push_back({t.col, t.row, t.value});
            const double exact_t = sigma_max_lanczos(tt, cols, rows);
            const double schur =
                std::sqrt(*std::max_element(rowsum.begin(), rowsum.end()) *
                          *std::max_element(colsum.begin(), colsum.end()));

            BaseBoundRow row;
            row.tuple = tuple;
            row.m = m;
            row.partition = kBasePartitions[pi];
            row.support = static_cast<long>(quads.size());
            row.exact = exact;
            row.schur = schur;
            row.hs = hs;
            row.paper_bound = base_tensor_bound(row.partition, tuple, eps);
            row.ratio = exact / row.paper_bound;
            row.duality_gap = std::abs(exact - exact_t);
            rep.max_duality_gap = std::max(rep.max_duality_gap, row.duality_gap);
            // norm <= Schur = (section-count product)^{1/2}; norm <= HS
            if (exact > schur * (1.0 + chain_tol) + chain_tol ||
                exact > hs * (1.0 + chain_tol) + chain_tol)
              rep.chain_ok = false;
            auto& fc = rep.fitted_constants[row.partition];
            fc = std::max(fc, row.ratio);
            rep.rows.push_back(row);
          }
        }
      }
  return rep;
}

}  // namespace wick2d
