#include "tbss/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>

namespace tbss::kernels {

int default_workers() { return std::max(1, omp_get_max_threads()); }

IndexTable packed_index_table(int n, int d) {
  const auto js = enumerate_multi_indices(n, d);
  IndexTable table(static_cast<Eigen::Index>(js.size()), d);
  for (std::size_t t = 0; t < js.size(); ++t) {
    const auto idx = sorted_indices(js[t]);
    for (int k = 0; k < d; ++k) table(static_cast<Eigen::Index>(t), k) = idx[static_cast<std::size_t>(k)];
  }
  return table;
}

namespace {

void accumulate_range(const Eigen::MatrixXd& samples, const IndexTable& table, Eigen::Index begin,
                      Eigen::Index end, double* sums) {
  const Eigen::Index order = table.cols();
  const Eigen::Index len = end - begin;
  if (len <= 0) return;
  Eigen::ArrayXd prod(len);
  for (Eigen::Index t = 0; t < table.rows(); ++t) {
    if (order == 0) {
      sums[t] += static_cast<double>(len);
      continue;
    }
    prod = samples.col(table(t, 0)).segment(begin, len).array();
    for (Eigen::Index k = 1; k < order; ++k) prod *= samples.col(table(t, k)).segment(begin, len).array();
    sums[t] += prod.sum();
  }
}

}  // namespace

std::vector<double> product_sums_serial(const Eigen::MatrixXd& samples, const IndexTable& table) {
  std::vector<double> sums(static_cast<std::size_t>(table.rows()), 0.0);
  for (Eigen::Index s = 0; s < samples.rows(); ++s) {
    for (Eigen::Index t = 0; t < table.rows(); ++t) {
      double p = 1.0;
      for (Eigen::Index k = 0; k < table.cols(); ++k) p *= samples(s, table(t, k));
      sums[static_cast<std::size_t>(t)] += p;
    }
  }
  return sums;
}

std::vector<double> product_sums_omp(const Eigen::MatrixXd& samples, const IndexTable& table,
                                     int workers) {
  if (workers <= 0) workers = default_workers();
  const Eigen::Index nrows = samples.rows();
  workers = static_cast<int>(std::min<Eigen::Index>(workers, std::max<Eigen::Index>(nrows, 1)));
  const auto nt = static_cast<std::size_t>(table.rows());
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(workers), std::vector<double>(nt, 0.0));

#pragma omp parallel for schedule(static) num_threads(workers)
  for (int w = 0; w < workers; ++w) {
    const Eigen::Index begin = nrows * w / workers;
    const Eigen::Index end = nrows * (w + 1) / workers;
    accumulate_range(samples, table, begin, end, partial[static_cast<std::size_t>(w)].data());
  }

  for (int stride = 1; stride < workers; stride *= 2) {
    for (int i = 0; i + stride < workers; i += 2 * stride) {
      auto& dst = partial[static_cast<std::size_t>(i)];
      const auto& src = partial[static_cast<std::size_t>(i + stride)];
      for (std::size_t t = 0; t < nt; ++t) dst[t] += src[t];
    }
  }
  return std::move(partial.front());
}

namespace {

void check_mode_product(const DenseTensor& t, const Eigen::MatrixXd& m, int mode) {
  if (mode < 0 || mode >= t.order()) throw std::invalid_argument("mode_product: invalid mode");
  if (static_cast<std::size_t>(m.cols()) != t.dim(mode))
    throw std::invalid_argument("mode_product: matrix column count does not match tensor dimension");
}

// View of t as (outer, n_mode, inner) with inner the product of later dims.
struct ModeSplit {
  std::size_t outer = 1, len = 1, inner = 1;
};

ModeSplit split(const DenseTensor& t, int mode) {
  ModeSplit s;
  for (int k = 0; k < mode; ++k) s.outer *= t.dim(k);
  s.len = t.dim(mode);
  for (int k = mode + 1; k < t.order(); ++k) s.inner *= t.dim(k);
  return s;
}

std::vector<std::size_t> out_dims(const DenseTensor& t, const Eigen::MatrixXd& m, int mode) {
  auto dims = t.dims();
  dims[static_cast<std::size_t>(mode)] = static_cast<std::size_t>(m.rows());
  return dims;
}

}  // namespace

DenseTensor mode_product_serial(const DenseTensor& t, const Eigen::MatrixXd& m, int mode) {
  check_mode_product(t, m, mode);
  const ModeSplit s = split(t, mode);
  const auto rows = static_cast<std::size_t>(m.rows());
  DenseTensor out(out_dims(t, m, mode));
  auto src = t.data();
  auto dst = out.data();
  for (std::size_t o = 0; o < s.outer; ++o)
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t a = 0; a < s.len; ++a) {
        const double w = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a));
        for (std::size_t r = 0; r < s.inner; ++r)
          dst[(o * rows + i) * s.inner + r] += w * src[(o * s.len + a) * s.inner + r];
      }
  return out;
}

DenseTensor mode_product_omp(const DenseTensor& t, const Eigen::MatrixXd& m, int mode) {
  check_mode_product(t, m, mode);
  const ModeSplit s = split(t, mode);
  const auto rows = static_cast<std::size_t>(m.rows());
  DenseTensor out(out_dims(t, m, mode));
  auto src = t.data();
  auto dst = out.data();
  const auto total = static_cast<long long>(s.outer * rows);
  // Each (outer, row) output slab is owned by one iteration; the inner
  // accumulation order matches the serial kernel, so results are identical.
#pragma omp parallel for schedule(static) if (total * static_cast<long long>(s.len * s.inner) > 32768)
  for (long long oi = 0; oi < total; ++oi) {
    const auto o = static_cast<std::size_t>(oi) / rows;
    const auto i = static_cast<std::size_t>(oi) % rows;
    double* out_row = dst.data() + (o * rows + i) * s.inner;
    for (std::size_t a = 0; a < s.len; ++a) {
      const double w = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a));
      const double* in_row = src.data() + (o * s.len + a) * s.inner;
      for (std::size_t r = 0; r < s.inner; ++r) out_row[r] += w * in_row[r];
    }
  }
  return out;
}

}  // namespace tbss::kernels
