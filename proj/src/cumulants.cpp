#include "tbss/cumulants.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tbss/kernels.hpp"

namespace tbss {

namespace {

void check_order(int d) {
  if (d < 1 || d > 4) throw std::invalid_argument("cumulants: order " + std::to_string(d) + " outside 1..4");
}

std::vector<double> averaged_sums(const SampleMatrix& z, int d, const EstimatorOptions& opts) {
  const auto table = kernels::packed_index_table(static_cast<int>(z.cols()), d);
  auto sums = opts.serial ? kernels::product_sums_serial(z, table) : kernels::product_sums_omp(z, table, opts.workers);
  const double inv_n = 1.0 / static_cast<double>(z.rows());
  for (auto& s : sums) s *= inv_n;
  return sums;
}

SampleMatrix centered(const SampleMatrix& z) { return z.rowwise() - z.colwise().mean(); }

// Leonov-Shiryaev order-4 correction given central moments.
double fourth_cumulant(double m4, double m_ij, double m_kl, double m_ik, double m_jl, double m_il, double m_jk) {
  return m4 - m_ij * m_kl - m_ik * m_jl - m_il * m_jk;
}

}  // namespace

void validate_samples(const SampleMatrix& z) {
  if (z.rows() < 1 || z.cols() < 1) throw std::invalid_argument("samples: need at least one sample and one variable");
  if (!z.allFinite()) throw std::invalid_argument("samples: non-finite entry");
}

SymTensor moment_tensor(const SampleMatrix& z, int d, const EstimatorOptions& opts) {
  check_order(d);
  validate_samples(z);
  return SymTensor(static_cast<int>(z.cols()), d, averaged_sums(z, d, opts));
}

SymTensor cumulant_tensor(const SampleMatrix& z, int d, const EstimatorOptions& opts) {
  check_order(d);
  validate_samples(z);
  const int n = static_cast<int>(z.cols());
  if (d == 1) return moment_tensor(z, 1, opts);
  if (z.rows() < 2) throw std::invalid_argument("cumulants: need N >= 2 for order >= 2");
  const SampleMatrix y = centered(z);
  SymTensor c(n, d, averaged_sums(y, d, opts));
  if (d < 4) return c;

  const SymTensor m2(n, 2, averaged_sums(y, 2, opts));
  const auto js = enumerate_multi_indices(n, 4);
  auto packed = c.packed();
  for (std::size_t t = 0; t < js.size(); ++t) {
    const auto ix = sorted_indices(js[t]);
    const int i = ix[0], j = ix[1], k = ix[2], l = ix[3];
    packed[t] = fourth_cumulant(packed[t], m2.entry({i, j}), m2.entry({k, l}), m2.entry({i, k}), m2.entry({j, l}),
                                m2.entry({i, l}), m2.entry({j, k}));
  }
  return c;
}

Eigen::VectorXd marginal_cumulants(const SampleMatrix& y, int d) {
  check_order(d);
  const auto nr = static_cast<double>(y.rows());
  Eigen::VectorXd out(y.cols());
  for (Eigen::Index i = 0; i < y.cols(); ++i) {
    const Eigen::ArrayXd v = y.col(i).array();
    const double m2 = v.square().sum() / nr;
    switch (d) {
      case 1: out(i) = v.sum() / nr; break;
      case 2: out(i) = m2; break;
      case 3: out(i) = v.cube().sum() / nr; break;
      default: out(i) = v.square().square().sum() / nr - 3.0 * m2 * m2; break;
    }
  }
  return out;
}

Eigen::VectorXd pair_cumulants(const SampleMatrix& y, int p, int q, int d) {
  check_order(d);
  SampleMatrix two(y.rows(), 2);
  two.col(0) = y.col(p);
  two.col(1) = y.col(q);
  // Entries of the 2-variable tensor in packed order are exactly p^(d-k) q^k.
  SymTensor c(2, d, averaged_sums(two, d, {.workers = 1, .serial = false}));
  if (d == 4) {
    const SymTensor m2(2, 2, averaged_sums(two, 2, {.workers = 1, .serial = false}));
    const auto js = enumerate_multi_indices(2, 4);
    for (std::size_t t = 0; t < js.size(); ++t) {
      const auto ix = sorted_indices(js[t]);
      c.packed()[t] = fourth_cumulant(c.packed()[t], m2.entry({ix[0], ix[1]}), m2.entry({ix[2], ix[3]}),
                                      m2.entry({ix[0], ix[2]}), m2.entry({ix[1], ix[3]}), m2.entry({ix[0], ix[3]}),
                                      m2.entry({ix[1], ix[2]}));
    }
  }
  return Eigen::Map<const Eigen::VectorXd>(c.packed().data(), d + 1);
}

double offdiag_ratio(const SymTensor& c) {
  const auto js = enumerate_multi_indices(c.dim(), c.order());
  double total = 0.0, off = 0.0;
  for (std::size_t t = 0; t < js.size(); ++t) {
    const double w = static_cast<double>(multiplicity(js[t])) * c.packed()[t] * c.packed()[t];
    total += w;
    // Diagonal multi-indices have a single nonzero exponent.
    int nonzero = 0;
    for (int v : js[t]) nonzero += v != 0;
    if (nonzero > 1) off += w;
  }
  return total == 0.0 ? 0.0 : std::sqrt(off / total);
}

}  // namespace tbss
