#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>

namespace tbss {

/// Numerical failure (as opposed to a contract violation). The CLI maps it to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Whitener {
  Eigen::MatrixXd transform;  ///< P x n, so that T R T^T = I for the (signal) covariance R
  int source_count = 0;       ///< P
  double noise_variance = 0;  ///< sigma, in units where the noise covariance is whitened to I
};

/// Canonical symmetric inverse square root T = V diag(lambda^-1/2) V^T, so
/// R = I gives T = I. Throws NumericalError when the smallest eigenvalue is at
/// or below 1e-12 * max(1, largest).
Whitener standardize(const Eigen::MatrixXd& ry);

/// Whitens the signal part R_s = R_y - R_v.
Whitener standardize_with_noise(const Eigen::MatrixXd& ry, const Eigen::MatrixXd& rv);

struct SourceDetection {
  int sources = 0;
  Whitener whitener;           ///< P x n reduced whitener
  Eigen::VectorXd eigenvalues;  ///< of T_v R_y T_v^T, descending
  double sigma = 0;            ///< noise level used for the count
};

/// Whitens by T_v (T_v R_v T_v^T = I; identity when rv is empty), then splits
/// T_v R_y T_v^T = U S U^T + sigma I and counts eigenvalues above
/// sigma (1 + threshold). When `noise_level` is given it is used as sigma
/// (0 for noiseless data); otherwise sigma is the mean of the n - P smallest
/// eigenvalues, with P the smallest count whose remaining eigenvalues all lie
/// within (1 + threshold) of their mean. The reduced whitener is
/// S^-1/2 U^T T_v, so its signal part has unit covariance.
SourceDetection detect_sources(const Eigen::MatrixXd& ry, const std::optional<Eigen::MatrixXd>& rv = std::nullopt,
                               double threshold = 0.1, std::optional<double> noise_level = std::nullopt);

/// Sample covariance with 1/N normalization.
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples);

}  // namespace tbss
