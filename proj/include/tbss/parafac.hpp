#pragma once
// Trilinear (PARAFAC / CP) decompositions G_ijk = sum_p lambda_p A_ip B_jp C_kp
// fitted by alternating least squares.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "tbss/tensor.hpp"

namespace tbss {

struct KruskalFactors {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
  /// Column weights; empty means all ones.
  Eigen::VectorXd lambda;

  int rank() const { return static_cast<int>(A.cols()); }
};

/// Columnwise Kronecker product with rows ordered (j, k) -> j * rows(c) + k,
/// matching the unfolding column order, so G(mode 0) = A * khatri_rao(B, C)^T.
Eigen::MatrixXd khatri_rao(const Eigen::MatrixXd& b, const Eigen::MatrixXd& c);

DenseTensor reconstruct(const KruskalFactors& f);

/// ||G - reconstruct(f)|| / ||G|| (absolute error when G = 0).
double relative_fit(const DenseTensor& g, const KruskalFactors& f);

/// Unit columns, nonnegative weights. The largest-magnitude entry of each A
/// and B column is made positive; the compensating signs go to C.
KruskalFactors normalize(const KruskalFactors& f);

enum class ALSInit { kSvd, kRandom };

struct ALSConfig {
  int rank = 1;
  int max_iters = 500;
  /// Stop when the fit improves by less than rel_tol times its previous value.
  double rel_tol = 1e-10;
  ALSInit init = ALSInit::kSvd;
  std::uint64_t seed = 0;
  /// Tie A = B = C (symmetric input only).
  bool symmetric = false;
};

struct ALSStepInfo {
  bool rank_deficient = false;  ///< some Khatri-Rao matrix lost column rank
};

/// One sweep: A, then B, then C, each the minimum-norm least-squares solution
/// against the matching unfolding. Weights are folded into A first.
KruskalFactors als_step(const DenseTensor& g, const KruskalFactors& f, ALSStepInfo* info = nullptr);

/// Symmetric variant: A is solved against khatri_rao(A, A) and copied to B and C.
KruskalFactors als_step_symmetric(const DenseTensor& g, const KruskalFactors& f, ALSStepInfo* info = nullptr);

/// Initial factors for a config: leading left singular vectors of each
/// unfolding, padded with seeded Gaussian columns when the rank exceeds the
/// unfolding size; or all seeded Gaussian.
KruskalFactors als_initial(const DenseTensor& g, const ALSConfig& cfg);

struct ALSResult {
  KruskalFactors factors;     ///< normalized
  std::vector<double> fit;    ///< relative fit of the initial point, then after every step
  int iterations = 0;
  bool converged = false;
  bool rank_deficient = false;
  std::vector<std::string> warnings;
};

ALSResult als(const DenseTensor& g, const ALSConfig& cfg);
ALSResult als(const DenseTensor& g, const ALSConfig& cfg, const KruskalFactors& init);

struct FactorMatch {
  /// est component matched to truth component p.
  std::vector<int> perm;
  /// Per truth component |cos(a)| |cos(b)| |cos(c)|.
  std::vector<double> congruence;
  double min_congruence = 0.0;
};

/// Greedy assignment on the product of absolute column cosines, which is
/// invariant to scaling, sign and permutation. Requires equal ranks.
FactorMatch factor_congruence(const KruskalFactors& est, const KruskalFactors& truth);

}  // namespace tbss
