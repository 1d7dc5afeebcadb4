#include "tbss/preprocess.hpp"

#include <algorithm>
#include <cmath>

namespace tbss {

namespace {

void check_square_symmetric(const Eigen::MatrixXd& r, const char* what) {
  if (r.rows() != r.cols() || r.rows() == 0) throw std::invalid_argument(std::string(what) + ": matrix must be square");
  const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
  if ((r - r.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::invalid_argument(std::string(what) + ": matrix must be symmetric");
}

// Eigenpairs of a symmetric matrix, eigenvalues descending.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> eig_desc(const Eigen::MatrixXd& r) {
  const Eigen::MatrixXd sym = 0.5 * (r + r.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  return {es.eigenvalues().reverse(), es.eigenvectors().rowwise().reverse()};
}

}  // namespace

Whitener standardize(const Eigen::MatrixXd& ry) {
  check_square_symmetric(ry, "standardize");
  const auto [lambda, v] = eig_desc(ry);
  const double floor = 1e-12 * std::max(1.0, lambda(0));
  if (lambda(lambda.size() - 1) <= floor)
    throw NumericalError("standardize: covariance is not positive definite (smallest eigenvalue " +
                         std::to_string(lambda(lambda.size() - 1)) + ")");
  Whitener w;
  w.transform = v * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
  w.source_count = static_cast<int>(ry.rows());
  return w;
}

Whitener standardize_with_noise(const Eigen::MatrixXd& ry, const Eigen::MatrixXd& rv) {
  check_square_symmetric(ry, "standardize_with_noise");
  check_square_symmetric(rv, "standardize_with_noise");
  if (ry.rows() != rv.rows()) throw std::invalid_argument("standardize_with_noise: size mismatch");
  try {
    return standardize(ry - rv);
  } catch (const NumericalError&) {
    throw NumericalError("standardize_with_noise: signal covariance R_y - R_v is numerically indefinite");
  }
}

SourceDetection detect_sources(const Eigen::MatrixXd& ry, const std::optional<Eigen::MatrixXd>& rv, double threshold,
                               std::optional<double> noise_level) {
  check_square_symmetric(ry, "detect_sources");
  const Eigen::Index n = ry.rows();
  Eigen::MatrixXd tv = Eigen::MatrixXd::Identity(n, n);
  if (rv) {
    if (rv->rows() != n) throw std::invalid_argument("detect_sources: noise covariance size mismatch");
    tv = standardize(*rv).transform;
  }
  const auto [mu, u] = eig_desc(tv * ry * tv.transpose());
  const double floor = 1e-12 * std::max(1.0, std::abs(mu(0)));

  SourceDetection out;
  out.eigenvalues = mu;
  int p = 0;
  double sigma = 0.0;
  if (noise_level) {
    sigma = *noise_level;
    const double cut = std::max(sigma * (1.0 + threshold), floor);
    while (p < n && mu(p) > cut) ++p;
  } else {
    for (p = 0; p < n; ++p) {
      const double mean = mu.tail(n - p).mean();
      if (mu(p) <= (1.0 + threshold) * mean) {
        sigma = mean;
        break;
      }
    }
  }
  out.sources = p;
  out.sigma = sigma;

  Eigen::MatrixXd t(p, n);
  for (int i = 0; i < p; ++i) t.row(i) = u.col(i).transpose() * tv / std::sqrt(mu(i) - sigma);
  out.whitener.transform = t;
  out.whitener.source_count = p;
  out.whitener.noise_variance = sigma;
  return out;
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples) {
  const Eigen::MatrixXd y = samples.rowwise() - samples.colwise().mean();
  return (y.transpose() * y) / static_cast<double>(samples.rows());
}

}  // namespace tbss
