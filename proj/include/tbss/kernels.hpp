#pragma once

// Data-parallel inner loops. Each kernel has a plain serial reference used by
// the tests and the benchmark, and an OpenMP version used by the library.

#include <Eigen/Dense>

#include <vector>

#include "tbss/tensor.hpp"

namespace tbss::kernels {

/// Index tuples, one per row (rows x order), entries in [0, samples.cols()).
using IndexTable = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Sorted index tuples of every packed entry of an order-d symmetric tensor.
IndexTable packed_index_table(int n, int d);

/// sums[t] = sum_s prod_k samples(s, table(t, k)). Straight loops, one pass.
std::vector<double> product_sums_serial(const Eigen::MatrixXd& samples, const IndexTable& table);

/// Same sums with samples split into `workers` contiguous chunks. Chunk
/// partials are combined by a pairwise tree: at each level slot i absorbs slot
/// i + stride for i a multiple of 2 * stride. The result is bit-reproducible
/// for a fixed worker count. workers <= 0 selects omp_get_max_threads().
std::vector<double> product_sums_omp(const Eigen::MatrixXd& samples, const IndexTable& table,
                                     int workers = 0);

DenseTensor mode_product_serial(const DenseTensor& t, const Eigen::MatrixXd& m, int mode);
DenseTensor mode_product_omp(const DenseTensor& t, const Eigen::MatrixXd& m, int mode);

int default_workers();

}  // namespace tbss::kernels
