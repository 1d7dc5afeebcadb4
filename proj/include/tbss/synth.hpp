#pragma once
// Seeded synthetic sources, mixtures y = A x + v, and permutation/scale
// invariant separation scores.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tbss/cumulants.hpp"

namespace tbss {

enum class SourceDist { kBpsk, kUniform, kGaussian };

/// "bpsk", "uniform" or "gaussian"; throws std::invalid_argument otherwise.
SourceDist parse_distribution(std::string_view name);
std::string_view distribution_name(SourceDist d);

enum class MixingKind { kOrthogonal, kGeneral, kIdentity, kGiven };
MixingKind parse_mixing(std::string_view name);
std::string_view mixing_name(MixingKind m);

struct GenConfig {
  int sources = 2;
  int sensors = 0;  ///< 0 means equal to sources
  /// One entry per source, or a single entry applied to all.
  std::vector<SourceDist> dists{SourceDist::kUniform};
  MixingKind mixing = MixingKind::kOrthogonal;
  Eigen::MatrixXd given;  ///< used with MixingKind::kGiven
  double noise_variance = 0.0;
  int nsamples = 1000;
  std::uint64_t seed = 0;
};

struct GeneratedData {
  SampleMatrix samples;  ///< N x sensors
  SampleMatrix sources;  ///< N x sources, unit variance
  Eigen::MatrixXd mixing;  ///< sensors x sources
};

/// Draw order from one stream: the mixing matrix (column-major), then the
/// sources sample by sample, then the noise sample by sample. BPSK is +-1,
/// uniform is on [-sqrt 3, sqrt 3], Gaussian is standard normal.
GeneratedData generate(const GenConfig& cfg);

/// Complex variable that is 0 with probability 1/2 and uniform on the unit
/// circle otherwise, as N x 2 real and imaginary parts. Its cumulants of
/// orders 3 and 4 all vanish, yet E|z| = 1/2 while a circular Gaussian with
/// the same covariance (E|z|^2 = 1/2) has E|z| = sqrt(pi / 8).
SampleMatrix circle_mixture(int nsamples, std::uint64_t seed);

struct SeparationScore {
  Eigen::MatrixXd gain;      ///< separator * A
  Eigen::VectorXd dominance; ///< per row max_j |G_ij| / ||G_i||
  std::vector<int> assignment;  ///< matched source per row (greedy, distinct)
  Eigen::VectorXd angle;     ///< per row acos of the matched dominance, radians
  double min_dominance = 0.0;
  double mean_dominance = 0.0;
  double max_angle = 0.0;
};

/// Requires separator columns == mixing rows.
SeparationScore score(const Eigen::MatrixXd& separator, const Eigen::MatrixXd& mixing);

}  // namespace tbss
