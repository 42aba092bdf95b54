#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wick2d/counting.hpp"
#include "wick2d/disc.hpp"

namespace wick2d {

using cd = std::complex<double>;

using TensorKey = std::vector<Vec2i>;  // one lattice point per axis

struct TensorKeyLess {
  bool operator()(const TensorKey& a, const TensorKey& b) const {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
      if (a[i].x() != b[i].x()) return a[i].x() < b[i].x();
      if (a[i].y() != b[i].y()) return a[i].y() < b[i].y();
    }
    return a.size() < b.size();
  }
};

// finitely supported function on (Z^2)^A with named axes
class SparseTensor {
 public:
  explicit SparseTensor(std::vector<std::string> axes) : axes_(std::move(axes)) {}

  const std::vector<std::string>& axes() const { return axes_; }
  int axis_index(const std::string& name) const;

  void set(const TensorKey& key, cd value);  // zero erases
  cd at(const TensorKey& key) const;
  const std::map<TensorKey, cd, TensorKeyLess>& entries() const { return entries_; }

  SparseTensor conjugate() const;

 private:
  std::vector<std::string> axes_;
  std::map<TensorKey, cd, TensorKeyLess> entries_;
};

struct Partition {
  std::vector<std::string> B;  // input axes
  std::vector<std::string> C;  // output axes
};

struct BaseTensorSpec {
  DyadicTuple tuple;
  long m = 0;
};

SparseTensor base_tensor(const BaseTensorSpec& spec, int cap = 16);

// exact operator norm of the B -> C matricization (largest singular value);
// empty B or C gives the Hilbert-Schmidt norm
double partition_norm(const SparseTensor& h, const Partition& p);

// sqrt(max row l1 * max col l1) on |entries|
double schur_bound(const SparseTensor& h, const Partition& p);

double hilbert_schmidt(const SparseTensor& h);

// largest singular value of a sparse matrix given by triplets, by
// Golub-Kahan bidiagonalization with full reorthogonalization
struct Triplet {
  int row = 0, col = 0;
  cd value;
};
double sigma_max_lanczos(const std::vector<Triplet>& t, int rows, int cols,
                         double rel_tol = 1e-12);

struct BaseBoundRow {
  DyadicTuple tuple;
  long m = 0;
  std::string partition;  // e.g. "n1n2n3->n"
  long support = 0;
  double exact = 0.0;
  double schur = 0.0;
  double hs = 0.0;
  double paper_bound = 0.0;
  double ratio = 0.0;        // exact / paper_bound
  double duality_gap = 0.0;  // |norm(B->C) - norm(C->B)| vs conj too
};

struct BaseTensorReport {
  int max_dyadic = 0;
  double eps = 0.25;
  std::vector<BaseBoundRow> rows;
  std::map<std::string, double> fitted_constants;  // per partition label
  bool chain_ok = true;       // exact <= schur <= section-count product
  double max_duality_gap = 0.0;
};

static constexpr const char* kBasePartitions[7] = {
    "n1n2n3->n", "n1->nn2n3", "n2->nn1n3", "n3->nn1n2",
    "n2n3->nn1", "n1n3->nn2", "n1n2->nn3"};

// right-hand sides of the seven base-tensor estimates at a given eps
double base_tensor_bound(const std::string& partition, const DyadicTuple& t,
                         double eps);

BaseTensorReport verify_base_tensor_bounds(int max_dyadic, double eps = 0.25);

}  // namespace wick2d
