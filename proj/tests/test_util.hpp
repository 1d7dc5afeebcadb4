#pragma once
// Seeded generators and brute-force oracles shared by the unit tests.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

#include "tbss/rng.hpp"
#include "tbss/tensor.hpp"

namespace tbss::testing {

inline DenseTensor random_dense(Rng& rng, std::vector<std::size_t> dims) {
  DenseTensor t(dims);
  for (auto& v : t.data()) v = rng.normal();
  return t;
}

inline SymTensor random_sym(Rng& rng, int n, int d) {
  std::vector<double> p(sym_size(n, d));
  for (auto& v : p) v = rng.normal();
  return SymTensor(n, d, std::move(p));
}

/// Calls f on every index tuple of the given dimensions in row-major order.
inline void for_each_index(const std::vector<std::size_t>& dims, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(dims.size(), 0);
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  for (std::size_t c = 0; c < total; ++c) {
    f(idx);
    for (std::size_t m = dims.size(); m-- > 0;) {
      if (++idx[m] < dims[m]) break;
      idx[m] = 0;
    }
  }
}

/// sum_{a b ..} M(i, a) M(j, b) .. T(a, b, ..) by explicit summation over every
/// entry; the independent oracle for congruence and Tucker products.
inline DenseTensor tucker_oracle(const DenseTensor& t, const std::vector<Eigen::MatrixXd>& mats) {
  std::vector<std::size_t> out_dims;
  for (const auto& m : mats) out_dims.push_back(static_cast<std::size_t>(m.rows()));
  DenseTensor out(out_dims);
  for_each_index(out_dims, [&](const std::vector<std::size_t>& i) {
    double s = 0;
    for_each_index(t.dims(), [&](const std::vector<std::size_t>& a) {
      double w = t(a);
      for (std::size_t m = 0; m < a.size(); ++m)
        w *= mats[m](static_cast<Eigen::Index>(i[m]), static_cast<Eigen::Index>(a[m]));
      s += w;
    });
    out(i) = s;
  });
  return out;
}

inline double rel_err(const DenseTensor& a, const DenseTensor& b) {
  const double nb = b.norm();
  return (a - b).norm() / (nb > 0 ? nb : 1.0);
}

/// Symmetric tensor of a diagonal order-d tensor with entries kappa, mixed by A:
/// sum_p kappa_p a_p o .. o a_p.
inline SymTensor mixed_diagonal(const Eigen::MatrixXd& a, const Eigen::VectorXd& kappa, int d) {
  SymTensor out(static_cast<int>(a.rows()), d);
  for (Eigen::Index p = 0; p < a.cols(); ++p) {
    const SymTensor r = sym_outer_power(a.col(p), d);
    for (std::size_t t = 0; t < out.packed().size(); ++t) out.packed()[t] += kappa(p) * r.packed()[t];
  }
  return out;
}

}  // namespace tbss::testing
