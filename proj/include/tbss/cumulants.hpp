#pragma once

#include <Eigen/Dense>

#include "tbss/tensor.hpp"

namespace tbss {

/// N x n sample matrix, one realization per row.
using SampleMatrix = Eigen::MatrixXd;

struct EstimatorOptions {
  /// Worker count for the sample-split reduction; <= 0 means all OpenMP threads.
  int workers = 0;
  /// Use the single-pass serial kernel instead of the chunked OpenMP one.
  bool serial = false;
};

/// Throws std::invalid_argument when there are no samples or a non-finite entry.
void validate_samples(const SampleMatrix& z);

/// Sample moments E{z_i1 .. z_id} with 1/N normalization, d in 1..4.
SymTensor moment_tensor(const SampleMatrix& z, int d, const EstimatorOptions& opts = {});

/// Plug-in cumulants from central moments, d in 1..4:
///   d = 1 mean, d = 2 covariance, d = 3 third central moment,
///   d = 4 m_ijkl - m_ij m_kl - m_ik m_jl - m_il m_jk.
/// Every estimator is an exact multilinear function of the centered samples,
/// so cumulant_tensor(z M^T, d) equals congruence(cumulant_tensor(z, d), M).
SymTensor cumulant_tensor(const SampleMatrix& z, int d, const EstimatorOptions& opts = {});

/// Diagonal entries C_{ii..i} only, from already centered samples.
Eigen::VectorXd marginal_cumulants(const SampleMatrix& centered, int d);

/// Plug-in cumulant tensor of two columns (p, q) of centered samples, returned
/// as the d + 1 values C_{p^(d-k) q^k}, k = 0..d.
Eigen::VectorXd pair_cumulants(const SampleMatrix& centered, int p, int q, int d);

/// ||off-diagonal part|| / ||C|| over the expanded tensor; 0 for the zero tensor.
double offdiag_ratio(const SymTensor& c);

}  // namespace tbss
