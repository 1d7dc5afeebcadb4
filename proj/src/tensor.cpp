#include "tbss/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tbss/kernels.hpp"

namespace tbss {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::string dims_string(const std::vector<std::size_t>& dims) {
  std::string s = "[";
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(dims[k]);
  }
  return s + "]";
}

// Advances a row-major multi-index; returns false after the last one.
bool next_index(std::vector<std::size_t>& idx, const std::vector<std::size_t>& dims) {
  for (std::size_t k = idx.size(); k-- > 0;) {
    if (++idx[k] < dims[k]) return true;
    idx[k] = 0;
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------- DenseTensor

DenseTensor::DenseTensor() : data_(1, 0.0) {}

DenseTensor::DenseTensor(std::vector<std::size_t> dims) : dims_(std::move(dims)), data_(product(dims_), 0.0) {
  for (auto n : dims_)
    if (n == 0) throw std::invalid_argument("DenseTensor: dimensions must be positive");
}

DenseTensor::DenseTensor(std::vector<std::size_t> dims, std::vector<double> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  for (auto n : dims_)
    if (n == 0) throw std::invalid_argument("DenseTensor: dimensions must be positive");
  if (data_.size() != product(dims_))
    throw std::invalid_argument("DenseTensor: data length " + std::to_string(data_.size()) +
                                " does not match dims " + dims_string(dims_));
}

DenseTensor DenseTensor::scalar(double value) { return DenseTensor({}, {value}); }

DenseTensor DenseTensor::from_vector(const Eigen::VectorXd& v) {
  return DenseTensor({static_cast<std::size_t>(v.size())}, std::vector<double>(v.data(), v.data() + v.size()));
}

DenseTensor DenseTensor::from_matrix(const Eigen::MatrixXd& m) {
  DenseTensor t({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) t.data_[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
  return t;
}

std::size_t DenseTensor::offset(std::span<const std::size_t> idx) const {
  if (idx.size() != dims_.size()) throw std::invalid_argument("DenseTensor: index arity does not match order");
  std::size_t off = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= dims_[k]) throw std::out_of_range("DenseTensor: index out of range");
    off = off * dims_[k] + idx[k];
  }
  return off;
}

std::vector<std::size_t> DenseTensor::strides() const {
  std::vector<std::size_t> s(dims_.size(), 1);
  for (std::size_t k = dims_.size(); k-- > 1;) s[k - 1] = s[k] * dims_[k];
  return s;
}

Eigen::VectorXd DenseTensor::to_vector() const {
  return Eigen::Map<const Eigen::VectorXd>(data_.data(), static_cast<Eigen::Index>(data_.size()));
}

Eigen::MatrixXd DenseTensor::to_matrix() const {
  if (order() != 2) throw std::invalid_argument("DenseTensor::to_matrix: order must be 2");
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMajor>(data_.data(), static_cast<Eigen::Index>(dims_[0]),
                                    static_cast<Eigen::Index>(dims_[1]));
}

double DenseTensor::norm() const { return to_vector().norm(); }

bool DenseTensor::all_dims_equal() const {
  return std::adjacent_find(dims_.begin(), dims_.end(), std::not_equal_to<>()) == dims_.end();
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  if (dims_ != other.dims_) throw std::invalid_argument("DenseTensor +=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
  if (dims_ != other.dims_) throw std::invalid_argument("DenseTensor -=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator*=(double s) {
  for (auto& x : data_) x *= s;
  return *this;
}

DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
DenseTensor operator*(double s, DenseTensor a) { return a *= s; }

// ------------------------------------------------------------------ SymTensor

SymTensor::SymTensor(int dim, int order) : dim_(dim), order_(order), packed_(sym_size(dim, order), 0.0) {
  if (dim < 1 || order < 0) throw std::invalid_argument("SymTensor: dim must be >= 1 and order >= 0");
}

SymTensor::SymTensor(int dim, int order, std::vector<double> packed)
    : dim_(dim), order_(order), packed_(std::move(packed)) {
  if (dim < 1 || order < 0) throw std::invalid_argument("SymTensor: dim must be >= 1 and order >= 0");
  if (packed_.size() != sym_size(dim, order))
    throw std::invalid_argument("SymTensor: packed length " + std::to_string(packed_.size()) + " but binom(" +
                                std::to_string(dim + order - 1) + "," + std::to_string(order) + ") = " +
                                std::to_string(sym_size(dim, order)) + " expected");
}

double SymTensor::entry(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != order_) throw std::invalid_argument("SymTensor::entry: arity mismatch");
  const auto j = index_map(indices, dim_);
  return packed_[multi_index_rank(j)];
}

DenseTensor SymTensor::expand() const {
  DenseTensor out(std::vector<std::size_t>(static_cast<std::size_t>(order_), static_cast<std::size_t>(dim_)));
  if (order_ == 0) {
    out.data()[0] = packed_[0];
    return out;
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(order_), 0);
  std::vector<int> iv(static_cast<std::size_t>(order_));
  std::size_t flat = 0;
  do {
    for (std::size_t k = 0; k < idx.size(); ++k) iv[k] = static_cast<int>(idx[k]);
    out.data()[flat++] = packed_[multi_index_rank(index_map(iv, dim_))];
  } while (next_index(idx, out.dims()));
  return out;
}

double SymTensor::norm() const {
  const auto js = enumerate_multi_indices(dim_, order_);
  double s = 0.0;
  for (std::size_t t = 0; t < js.size(); ++t) s += static_cast<double>(multiplicity(js[t])) * packed_[t] * packed_[t];
  return std::sqrt(s);
}

// ----------------------------------------------------------------- products

DenseTensor outer_product(const DenseTensor& a, const DenseTensor& b) {
  auto dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  std::vector<double> data;
  data.reserve(a.size() * b.size());
  for (double x : a.data())
    for (double y : b.data()) data.push_back(x * y);
  return DenseTensor(std::move(dims), std::move(data));
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b, int mode_a, int mode_b) {
  if (mode_a < 0 || mode_a >= a.order() || mode_b < 0 || mode_b >= b.order())
    throw std::invalid_argument("contract: invalid mode");
  if (a.dim(mode_a) != b.dim(mode_b))
    throw std::invalid_argument("contract: dimension mismatch (" + std::to_string(a.dim(mode_a)) + " vs " +
                                std::to_string(b.dim(mode_b)) + ") on the contracted modes");
  // Move the contracted mode to the front of both operands, then a single GEMM.
  const Eigen::MatrixXd ua = mode_n_unfold(a, mode_a);  // n x rest_a
  const Eigen::MatrixXd ub = mode_n_unfold(b, mode_b);  // n x rest_b
  const Eigen::MatrixXd c = ua.transpose() * ub;
  std::vector<std::size_t> dims;
  for (int k = 0; k < a.order(); ++k)
    if (k != mode_a) dims.push_back(a.dim(k));
  for (int k = 0; k < b.order(); ++k)
    if (k != mode_b) dims.push_back(b.dim(k));
  std::vector<double> data(static_cast<std::size_t>(c.size()));
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j) data[static_cast<std::size_t>(i * c.cols() + j)] = c(i, j);
  return DenseTensor(std::move(dims), std::move(data));
}

DenseTensor mode_product(const DenseTensor& t, const Eigen::MatrixXd& m, int mode) {
  return kernels::mode_product_omp(t, m, mode);
}

DenseTensor tucker_transform(const DenseTensor& t, std::span<const Eigen::MatrixXd> mats) {
  if (static_cast<int>(mats.size()) != t.order())
    throw std::invalid_argument("tucker_transform: need one matrix per mode");
  for (int k = 0; k < t.order(); ++k)
    if (static_cast<std::size_t>(mats[static_cast<std::size_t>(k)].cols()) != t.dim(k))
      throw std::invalid_argument("tucker_transform: matrix " + std::to_string(k) + " has " +
                                  std::to_string(mats[static_cast<std::size_t>(k)].cols()) + " columns, mode has " +
                                  std::to_string(t.dim(k)));
  DenseTensor out = t;
  for (int k = 0; k < t.order(); ++k) out = mode_product(out, mats[static_cast<std::size_t>(k)], k);
  return out;
}

DenseTensor tucker_transform(const DenseTensor& t, std::initializer_list<Eigen::MatrixXd> mats) {
  return tucker_transform(t, std::span<const Eigen::MatrixXd>(mats.begin(), mats.size()));
}

SymTensor congruence(const SymTensor& t, const Eigen::MatrixXd& m) {
  const std::vector<Eigen::MatrixXd> mats(static_cast<std::size_t>(t.order()), m);
  const DenseTensor out = tucker_transform(t.expand(), mats);
  if (t.order() == 0) return SymTensor(static_cast<int>(m.rows()), 0, {out.data()[0]});
  return symmetrize(out);
}

Eigen::MatrixXd mode_n_unfold(const DenseTensor& t, int mode) {
  if (mode < 0 || mode >= t.order())
    throw std::invalid_argument("mode_n_unfold: mode " + std::to_string(mode) + " invalid for order " +
                                std::to_string(t.order()));
  std::size_t outer = 1, inner = 1;
  for (int k = 0; k < mode; ++k) outer *= t.dim(k);
  for (int k = mode + 1; k < t.order(); ++k) inner *= t.dim(k);
  const std::size_t len = t.dim(mode);
  Eigen::MatrixXd u(static_cast<Eigen::Index>(len), static_cast<Eigen::Index>(outer * inner));
  auto src = t.data();
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t r = 0; r < inner; ++r)
        u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(o * inner + r)) = src[(o * len + i) * inner + r];
  return u;
}

int mode_n_rank(const DenseTensor& t, int mode, double eps) {
  const Eigen::MatrixXd u = mode_n_unfold(t, mode);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(u).singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double max_dim = static_cast<double>(*std::max_element(t.dims().begin(), t.dims().end()));
  const double thresh = max_dim * eps * sv(0);
  return static_cast<int>((sv.array() > thresh).count());
}

double frobenius_inner(const DenseTensor& g, const DenseTensor& h) {
  if (g.dims() != h.dims()) throw std::invalid_argument("frobenius_inner: shape mismatch");
  return g.to_vector().dot(h.to_vector());
}

Eigen::VectorXd kronecker(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  Eigen::VectorXd out(u.size() * v.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) out.segment(j * v.size(), v.size()) = u(j) * v;
  return out;
}

Eigen::VectorXd sym_kronecker(const Eigen::VectorXd& w, int d) {
  if (d < 1) throw std::invalid_argument("sym_kronecker: order must be >= 1");
  const int n = static_cast<int>(w.size());
  const auto js = enumerate_multi_indices(n, d);
  Eigen::VectorXd out(static_cast<Eigen::Index>(js.size()));
  for (std::size_t t = 0; t < js.size(); ++t) {
    double mono = 1.0;
    for (int k = 0; k < n; ++k) mono *= std::pow(w(k), js[t][static_cast<std::size_t>(k)]);
    out(static_cast<Eigen::Index>(t)) = std::sqrt(static_cast<double>(multiplicity(js[t]))) * mono;
  }
  return out;
}

Eigen::VectorXd vecs(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("vecs: matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw std::invalid_argument("vecs: matrix is not symmetric within tolerance");
  const Eigen::Index n = m.rows();
  Eigen::VectorXd out(n * (n + 1) / 2);
  Eigen::Index t = 0;
  // Packed order for d = 2 is (0,0),(0,1),..,(0,n-1),(1,1),..: row-wise upper triangle.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) out(t++) = (i == j ? 1.0 : std::sqrt(2.0)) * 0.5 * (m(i, j) + m(j, i));
  return out;
}

Eigen::MatrixXd unvecs(const Eigen::VectorXd& x) {
  const double disc = std::sqrt(1.0 + 8.0 * static_cast<double>(x.size()));
  const auto n = static_cast<Eigen::Index>(std::llround((disc - 1.0) / 2.0));
  if (n * (n + 1) / 2 != x.size()) throw std::invalid_argument("unvecs: length is not triangular");
  Eigen::MatrixXd m(n, n);
  Eigen::Index t = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = x(t++) / (i == j ? 1.0 : std::sqrt(2.0));
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

SymTensor symmetrize(const DenseTensor& t) {
  if (!t.all_dims_equal()) throw std::invalid_argument("symmetrize: all dimensions must be equal");
  if (t.order() == 0) throw std::invalid_argument("symmetrize: order-0 tensor has no dimension");
  const int n = static_cast<int>(t.dim(0));
  const int d = t.order();
  SymTensor out(n, d);
  auto packed = out.packed();
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<int> iv(static_cast<std::size_t>(d));
  std::size_t flat = 0;
  do {
    for (std::size_t k = 0; k < idx.size(); ++k) iv[k] = static_cast<int>(idx[k]);
    packed[multi_index_rank(index_map(iv, n))] += t.data()[flat++];
  } while (next_index(idx, t.dims()));
  const auto js = enumerate_multi_indices(n, d);
  for (std::size_t k = 0; k < js.size(); ++k) packed[k] /= static_cast<double>(multiplicity(js[k]));
  return out;
}

SymTensor sym_outer_power(const Eigen::VectorXd& w, int d) {
  const int n = static_cast<int>(w.size());
  const auto js = enumerate_multi_indices(n, d);
  std::vector<double> packed(js.size());
  for (std::size_t t = 0; t < js.size(); ++t) {
    double v = 1.0;
    for (int k = 0; k < n; ++k) v *= std::pow(w(k), js[t][static_cast<std::size_t>(k)]);
    packed[t] = v;
  }
  return SymTensor(n, d, std::move(packed));
}

}  // namespace tbss
