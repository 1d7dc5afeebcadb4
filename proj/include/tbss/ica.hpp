#pragma once
// Orthogonal ICA by Jacobi-type pair sweeps that maximize a diagonal contrast
// sum_i |Z_ii..i|^alpha of a standardized cumulant tensor.
//
// Rotation convention: the pair (p, q) rotation by phi maps
//   z_p = cos(phi) y_p + sin(phi) y_q,  z_q = -sin(phi) y_p + cos(phi) y_q
// and accumulates as Q <- R Q, so z = Q y and Z = congruence(G, Q).

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "tbss/cumulants.hpp"
#include "tbss/preprocess.hpp"
#include "tbss/tensor.hpp"

namespace tbss {

struct ContrastSpec {
  int alpha = 2;  ///< 1: signed sum of diagonal entries, 2: sum of squares
  int order = 4;  ///< 2, 3 or 4
};

/// Throws std::invalid_argument unless (alpha, order) is one of
/// (1,3), (1,4), (2,2), (2,3), (2,4).
void check_contrast(const ContrastSpec& spec);

struct PairRotation {
  int p = 0;
  int q = 1;
  double phi = 0.0;   ///< in (-pi/4, pi/4], or (-pi, pi] for alpha = 1, d = 3
  double gain = 0.0;  ///< contrast increase produced by the rotation
};

struct ICAResult {
  Eigen::MatrixXd Q;
  SymTensor Z;
  /// Contrast before any rotation, then the running sum of the gains. It
  /// tracks contrast_value(Z) to rounding.
  std::vector<double> trace;
  /// Analytic gain of each accepted rotation (all strictly positive).
  std::vector<double> gains;
  int sweeps = 0;     ///< full sweeps run (cyclic); 0 for greedy
  int rotations = 0;  ///< accepted rotations
  bool converged = false;
};

double contrast_value(const SymTensor& z, const ContrastSpec& spec);

/// Contrast restricted to the pair as a function of the angle, from the pair
/// entries g_k = G_{p^(d-k) q^k}, k = 0..d. Only the two diagonal terms that
/// the rotation changes are included.
double pair_contrast(const Eigen::VectorXd& pair_entries, double phi, const ContrastSpec& spec);

/// pair_contrast(phi) - pair_contrast(0), evaluated without cancellation for
/// small angles.
double pair_gain(const Eigen::VectorXd& pair_entries, double phi, const ContrastSpec& spec);

/// Globally optimal angle for one pair. Angles are reduced modulo pi/2 into
/// (-pi/4, pi/4] except for the signed odd contrast (alpha = 1, d = 3): a half
/// turn negates it, so its angle lives in (-pi, pi]. Returns phi = 0 when no angle improves.
PairRotation pair_rotation_optimal(const SymTensor& g, int p, int q, const ContrastSpec& spec);
PairRotation pair_rotation_optimal(const Eigen::VectorXd& pair_entries, const ContrastSpec& spec);

/// Optimal angle via the stationarity polynomial in t = tan(phi) for every
/// supported contrast. pair_rotation_optimal uses this route only for
/// (2,4) and (1,3); the other cases use a closed-form quadratic form in
/// (cos 4 phi, sin 4 phi). Exposed so both routes can be cross-checked.
PairRotation pair_rotation_by_rooting(const Eigen::VectorXd& pair_entries, const ContrastSpec& spec);

/// Cyclic-by-rows sweeps. max_sweeps <= 0 selects ceil(sqrt(n)) + 3. Stops
/// when the largest accepted |phi| in a sweep is below 1e-8.
ICAResult sweep_cyclic(const SymTensor& g, const ContrastSpec& spec, int max_sweeps = 0);

/// Applies, one at a time, the rotation with the largest gain over all pairs.
/// max_rotations <= 0 selects (ceil(sqrt(n)) + 3) * n (n - 1) / 2.
ICAResult sweep_greedy(const SymTensor& g, const ContrastSpec& spec, int max_rotations = 0);

/// Largest pairwise violation of the first-order optimality conditions.
double stationarity_residual(const SymTensor& z, int d);

/// Second-order expression for pair (q, r); negative at strict local maxima
/// of the pair contrast.
double convexity_margin(const SymTensor& z, int d, int q, int r);

enum class SweepStrategy { kCyclic, kGreedy };
/// kTensor rotates the materialized cumulant tensor; kData rotates the
/// standardized samples and re-estimates pair cumulants for every pair.
enum class UpdateStrategy { kTensor, kData };

struct ICAOptions {
  SweepStrategy strategy = SweepStrategy::kCyclic;
  UpdateStrategy update = UpdateStrategy::kTensor;
  int max_sweeps = 0;  ///< cyclic sweeps, or greedy rotation budget; <= 0 for the default
  /// Number of sources to keep; must not exceed the number of sensors.
  std::optional<int> sources;
  /// Estimate the number of sources from the covariance spectrum.
  bool detect = false;
  double detect_threshold = 0.1;
  EstimatorOptions estimator;
};

struct ICAOutput {
  Whitener whitener;
  ICAResult result;
  Eigen::MatrixXd separator;  ///< Q * T, P x n
  double stationarity = 0.0;
  /// Largest |Z_ii..i| is within the sampling noise floor 5 sqrt(d! / N).
  bool low_confidence = false;
  double confidence_floor = 0.0;
};

/// Standardize, estimate the order-d cumulant tensor, sweep.
ICAOutput ica(const SampleMatrix& samples, const ContrastSpec& spec, const ICAOptions& options = {});

/// P x n whitener onto the P dominant covariance directions, with the mean of
/// the discarded eigenvalues treated as noise.
Whitener whiten_to_rank(const Eigen::MatrixXd& ry, int p);

}  // namespace tbss
