#include "tbss/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tbss/rng.hpp"

namespace tbss {

SourceDist parse_distribution(std::string_view name) {
  if (name == "bpsk") return SourceDist::kBpsk;
  if (name == "uniform") return SourceDist::kUniform;
  if (name == "gaussian") return SourceDist::kGaussian;
  throw std::invalid_argument("unknown distribution '" + std::string(name) + "' (bpsk, uniform, gaussian)");
}

std::string_view distribution_name(SourceDist d) {
  switch (d) {
    case SourceDist::kBpsk: return "bpsk";
    case SourceDist::kUniform: return "uniform";
    default: return "gaussian";
  }
}

MixingKind parse_mixing(std::string_view name) {
  if (name == "orthogonal") return MixingKind::kOrthogonal;
  if (name == "general") return MixingKind::kGeneral;
  if (name == "identity") return MixingKind::kIdentity;
  if (name == "given") return MixingKind::kGiven;
  throw std::invalid_argument("unknown mixing '" + std::string(name) + "' (orthogonal, general, identity, given)");
}

std::string_view mixing_name(MixingKind m) {
  switch (m) {
    case MixingKind::kOrthogonal: return "orthogonal";
    case MixingKind::kGeneral: return "general";
    case MixingKind::kIdentity: return "identity";
    default: return "given";
  }
}

GeneratedData generate(const GenConfig& cfg) {
  const int p = cfg.sources;
  const int n = cfg.sensors > 0 ? cfg.sensors : p;
  if (p < 1) throw std::invalid_argument("gen: need at least one source");
  if (cfg.nsamples < 1) throw std::invalid_argument("gen: need at least one sample");
  if (!(cfg.noise_variance >= 0.0)) throw std::invalid_argument("gen: noise variance must be nonnegative");
  if (cfg.dists.size() != 1 && cfg.dists.size() != static_cast<std::size_t>(p))
    throw std::invalid_argument("gen: give one distribution or one per source");

  Rng rng(cfg.seed);
  GeneratedData out;
  switch (cfg.mixing) {
    case MixingKind::kOrthogonal:
      out.mixing = rng.orthogonal(std::max(n, p)).topLeftCorner(n, p);
      break;
    case MixingKind::kGeneral:
      out.mixing = rng.normal_matrix(n, p);
      break;
    case MixingKind::kIdentity:
      if (n != p) throw std::invalid_argument("gen: identity mixing needs as many sensors as sources");
      out.mixing = Eigen::MatrixXd::Identity(n, p);
      break;
    case MixingKind::kGiven:
      if (cfg.given.rows() != n || cfg.given.cols() != p)
        throw std::invalid_argument("gen: given mixing must be sensors x sources");
      out.mixing = cfg.given;
      break;
  }

  out.sources.resize(cfg.nsamples, p);
  const double half_width = std::sqrt(3.0);
  for (int s = 0; s < cfg.nsamples; ++s) {
    for (int i = 0; i < p; ++i) {
      const SourceDist d = cfg.dists.size() == 1 ? cfg.dists[0] : cfg.dists[static_cast<std::size_t>(i)];
      double v;
      switch (d) {
        case SourceDist::kBpsk: v = rng.sign(); break;
        case SourceDist::kUniform: v = half_width * (2.0 * rng.uniform() - 1.0); break;
        default: v = rng.normal(); break;
      }
      out.sources(s, i) = v;
    }
  }
  out.samples = out.sources * out.mixing.transpose();
  if (cfg.noise_variance > 0.0) {
    const double sd = std::sqrt(cfg.noise_variance);
    for (int s = 0; s < cfg.nsamples; ++s)
      for (int i = 0; i < n; ++i) out.samples(s, i) += sd * rng.normal();
  }
  return out;
}

SampleMatrix circle_mixture(int nsamples, std::uint64_t seed) {
  if (nsamples < 1) throw std::invalid_argument("circle_mixture: need at least one sample");
  Rng rng(seed);
  SampleMatrix z(nsamples, 2);
  for (int s = 0; s < nsamples; ++s) {
    const double on = rng.sign() > 0 ? 1.0 : 0.0;
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    z(s, 0) = on * std::cos(theta);
    z(s, 1) = on * std::sin(theta);
  }
  return z;
}

SeparationScore score(const Eigen::MatrixXd& separator, const Eigen::MatrixXd& mixing) {
  if (separator.cols() != mixing.rows())
    throw std::invalid_argument("score: separator has " + std::to_string(separator.cols()) +
                                " columns but the mixing has " + std::to_string(mixing.rows()) + " rows");
  SeparationScore sc;
  sc.gain = separator * mixing;
  const auto rows = sc.gain.rows(), cols = sc.gain.cols();
  Eigen::MatrixXd ratio(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double nr = sc.gain.row(i).norm();
    ratio.row(i) = nr > 0 ? Eigen::RowVectorXd(sc.gain.row(i).cwiseAbs() / nr) : Eigen::RowVectorXd::Zero(cols);
  }
  sc.dominance = ratio.rowwise().maxCoeff();

  // Greedy distinct matching on the normalized magnitudes.
  sc.assignment.assign(static_cast<std::size_t>(rows), -1);
  sc.angle = Eigen::VectorXd::Constant(rows, std::numbers::pi / 2);
  std::vector<bool> row_used(static_cast<std::size_t>(rows)), col_used(static_cast<std::size_t>(cols));
  for (Eigen::Index step = 0; step < std::min(rows, cols); ++step) {
    double best = -1;
    Eigen::Index bi = 0, bj = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j)
        if (!row_used[static_cast<std::size_t>(i)] && !col_used[static_cast<std::size_t>(j)] && ratio(i, j) > best) {
          best = ratio(i, j);
          bi = i;
          bj = j;
        }
    row_used[static_cast<std::size_t>(bi)] = col_used[static_cast<std::size_t>(bj)] = true;
    sc.assignment[static_cast<std::size_t>(bi)] = static_cast<int>(bj);
    sc.angle(bi) = std::acos(std::min(1.0, best));
  }
  sc.min_dominance = rows ? sc.dominance.minCoeff() : 0.0;
  sc.mean_dominance = rows ? sc.dominance.mean() : 0.0;
  sc.max_angle = rows ? sc.angle.maxCoeff() : 0.0;
  return sc;
}

}  // namespace tbss
