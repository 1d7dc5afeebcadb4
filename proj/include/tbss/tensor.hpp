#pragma once

// Dense and symmetric tensors plus the multilinear products built on them.
//
// Layout: row-major, last index fastest. Modes are 0-based throughout the
// C++ API. Unfoldings enumerate the remaining indices lexicographically in
// increasing mode order, so the mode-0 unfolding of an n1 x n2 x n3 tensor has
// column index j * n3 + k.

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "tbss/multi_index.hpp"

namespace tbss {

class DenseTensor {
 public:
  /// Order-0 tensor holding 0.
  DenseTensor();
  /// Zero tensor with the given dimensions.
  explicit DenseTensor(std::vector<std::size_t> dims);
  DenseTensor(std::vector<std::size_t> dims, std::vector<double> data);

  static DenseTensor scalar(double value);
  static DenseTensor from_vector(const Eigen::VectorXd& v);
  static DenseTensor from_matrix(const Eigen::MatrixXd& m);

  int order() const { return static_cast<int>(dims_.size()); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim(int mode) const { return dims_.at(static_cast<std::size_t>(mode)); }
  std::size_t size() const { return data_.size(); }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  std::size_t offset(std::span<const std::size_t> idx) const;
  double operator()(std::span<const std::size_t> idx) const { return data_[offset(idx)]; }
  double& operator()(std::span<const std::size_t> idx) { return data_[offset(idx)]; }
  double operator()(std::initializer_list<std::size_t> idx) const {
    return (*this)(std::span<const std::size_t>(idx.begin(), idx.size()));
  }
  double& operator()(std::initializer_list<std::size_t> idx) {
    return (*this)(std::span<const std::size_t>(idx.begin(), idx.size()));
  }

  /// Row-major strides, one per mode.
  std::vector<std::size_t> strides() const;

  Eigen::VectorXd to_vector() const;  ///< flattened data
  Eigen::MatrixXd to_matrix() const;  ///< order 2 only

  double norm() const;
  bool all_dims_equal() const;

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator-=(const DenseTensor& other);
  DenseTensor& operator*=(double s);

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> data_;
};

DenseTensor operator+(DenseTensor a, const DenseTensor& b);
DenseTensor operator-(DenseTensor a, const DenseTensor& b);
DenseTensor operator*(double s, DenseTensor a);

/// Symmetric tensor stored by distinct entries, one per multi-index j with
/// |j| = order, in the order of enumerate_multi_indices (lexicographically
/// descending in j). The packed value is the tensor entry itself, shared by
/// all c(j) positions carrying that multi-index.
class SymTensor {
 public:
  SymTensor() = default;
  SymTensor(int dim, int order);
  SymTensor(int dim, int order, std::vector<double> packed);

  int dim() const { return dim_; }
  int order() const { return order_; }
  std::span<const double> packed() const { return packed_; }
  std::span<double> packed() { return packed_; }

  /// Entry by multi-index j (length dim, sum order).
  double at_multi(std::span<const int> j) const { return packed_[multi_index_rank(j)]; }
  double& at_multi(std::span<const int> j) { return packed_[multi_index_rank(j)]; }
  /// Entry by index tuple (length order, entries in [0, dim)), any permutation.
  double entry(std::span<const int> indices) const;
  double entry(std::initializer_list<int> indices) const {
    return entry(std::span<const int>(indices.begin(), indices.size()));
  }

  DenseTensor expand() const;
  double norm() const;

  friend bool operator==(const SymTensor&, const SymTensor&) = default;

 private:
  int dim_ = 0;
  int order_ = 0;
  std::vector<double> packed_;
};

DenseTensor outer_product(const DenseTensor& a, const DenseTensor& b);

/// Sums over index `mode_a` of a and `mode_b` of b. The result carries the
/// remaining modes of a followed by the remaining modes of b.
DenseTensor contract(const DenseTensor& a, const DenseTensor& b, int mode_a = 0, int mode_b = 0);

/// Mode product: out[.., i, ..] = sum_a m(i, a) t[.., a, ..] along `mode`.
DenseTensor mode_product(const DenseTensor& t, const Eigen::MatrixXd& m, int mode);

/// T'_{ij..} = sum A_{ia} B_{jb} .. T_{ab..}; one matrix per mode.
DenseTensor tucker_transform(const DenseTensor& t, std::span<const Eigen::MatrixXd> mats);
DenseTensor tucker_transform(const DenseTensor& t, std::initializer_list<Eigen::MatrixXd> mats);

/// Same matrix on every mode, re-symmetrized. Output dimension is m.rows().
SymTensor congruence(const SymTensor& t, const Eigen::MatrixXd& m);

Eigen::MatrixXd mode_n_unfold(const DenseTensor& t, int mode);

/// Numerical rank of the mode unfolding: singular values above
/// max(dims) * eps * sigma_1.
int mode_n_rank(const DenseTensor& t, int mode, double eps = 1e-12);

double frobenius_inner(const DenseTensor& g, const DenseTensor& h);

Eigen::VectorXd kronecker(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Distinct products sqrt(c(j)) * w^j in packed order, so ||w^{(/)d}|| = ||w^{(x)d}||.
Eigen::VectorXd sym_kronecker(const Eigen::VectorXd& w, int d);

/// Packs a symmetric matrix with sqrt(2)-weighted off-diagonal entries, the
/// d = 2 case of the sym_kronecker weighting. Rejects asymmetry above
/// tol * max(1, max|M|).
Eigen::VectorXd vecs(const Eigen::MatrixXd& m, double tol = 1e-10);
Eigen::MatrixXd unvecs(const Eigen::VectorXd& x);

/// Averages over all index permutations and packs. Requires equal dims.
SymTensor symmetrize(const DenseTensor& t);

/// Rank-1 symmetric tensor w o w o .. o w (d factors).
SymTensor sym_outer_power(const Eigen::VectorXd& w, int d);

}  // namespace tbss
