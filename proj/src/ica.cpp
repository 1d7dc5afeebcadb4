#include "tbss/ica.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tbss/polyroots.hpp"

namespace tbss {

namespace {

constexpr double kAngleTol = 1e-8;
constexpr double kQuarterPi = std::numbers::pi / 4;
constexpr double kHalfPi = std::numbers::pi / 2;

double h(double x, int alpha) { return alpha == 2 ? x * x : x; }

int default_sweeps(int n) { return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))) + 3; }

void check_pair_entries(const Eigen::VectorXd& g, const ContrastSpec& spec) {
  check_contrast(spec);
  if (g.size() != spec.order + 1) throw std::invalid_argument("pair entries: expected order + 1 values");
}

// Changes of the two diagonal entries, (Z_p(phi) - g_0, Z_q(phi) - g_d).
std::pair<double, double> diagonal_deltas(const Eigen::VectorXd& g, double phi, int d) {
  const double c = std::cos(phi), s = std::sin(phi);
  // c^d - 1 without cancellation. cos(phi) rounds to 1 for |phi| < 1e-8, so
  // go through c - 1 = -2 sin^2(phi / 2).
  const double half = std::sin(0.5 * phi);
  const double cd_m1 = c > 0 ? std::expm1(d * std::log1p(-2.0 * half * half)) : std::pow(c, d) - 1.0;
  double dp = cd_m1 * g(0), dq = cd_m1 * g(d);
  double sk = 1.0;
  for (int k = 1; k <= d; ++k) {
    sk *= s;
    const double w = static_cast<double>(binomial(d, k)) * std::pow(c, d - k) * sk;
    dp += w * g(k);
    dq += (k % 2 ? -w : w) * g(d - k);
  }
  return {dp, dq};
}

double reduce_angle(double phi, const ContrastSpec& spec) {
  // A signed odd-order contrast flips sign under a half turn, so the whole
  // circle is searched there.
  if (spec.alpha == 1 && spec.order % 2 == 1) return std::remainder(phi, 2 * std::numbers::pi) == -std::numbers::pi
                                                        ? std::numbers::pi
                                                        : std::remainder(phi, 2 * std::numbers::pi);
  phi -= std::round(phi / kHalfPi) * kHalfPi;
  if (phi <= -kQuarterPi) phi += kHalfPi;
  return phi;
}

PairRotation finalize(double phi, const Eigen::VectorXd& g, const ContrastSpec& spec) {
  PairRotation r;
  r.phi = reduce_angle(phi, spec);
  r.gain = pair_gain(g, r.phi, spec);
  if (!(r.gain > 0.0)) r = PairRotation{};
  return r;
}

// The cases whose pair contrast is a0 + a1 cos 4phi + b1 sin 4phi, i.e. the
// quadratic form u^T [[a0 + a1, b1], [b1, a0 - a1]] u in u = (cos 2phi, sin 2phi).
// The maximizing u is the dominant eigenvector, at 4 phi = atan2(b1, a1).
PairRotation quadratic_form_route(const Eigen::VectorXd& g, const ContrastSpec& spec) {
  const double g4 = pair_gain(g, kQuarterPi, spec), g8 = pair_gain(g, kQuarterPi / 2, spec);
  const double a1 = -0.5 * g4;
  double b1 = g8 + a1;
  // b1 is a difference of two gains; below this it is rounding noise.
  if (std::abs(b1) <= 64 * std::numeric_limits<double>::epsilon() * (std::abs(g8) + std::abs(a1))) b1 = 0.0;
  if (a1 == 0.0 && b1 == 0.0) return {};
  return finalize(0.25 * std::atan2(b1, a1), g, spec);
}

using Coeffs = Eigen::VectorXd;  // ascending powers of t

Coeffs pmul(const Coeffs& a, const Coeffs& b) {
  Coeffs r = Coeffs::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) r(i + j) += a(i) * b(j);
  return r;
}

Coeffs padd(const Coeffs& a, const Coeffs& b) {
  Coeffs r = Coeffs::Zero(std::max(a.size(), b.size()));
  r.head(a.size()) += a;
  r.head(b.size()) += b;
  return r;
}

Coeffs pderiv(const Coeffs& a) {
  if (a.size() <= 1) return Coeffs::Zero(1);
  Coeffs r(a.size() - 1);
  for (Eigen::Index k = 1; k < a.size(); ++k) r(k - 1) = static_cast<double>(k) * a(k);
  return r;
}

// Ascending coefficients of -d t * a(t) + (1 + t^2) * b(t).
Coeffs stationarity(const Coeffs& a, const Coeffs& b, int d) {
  Coeffs one_t2(3);
  one_t2 << 1.0, 0.0, 1.0;
  Coeffs dt(2);
  dt << 0.0, -static_cast<double>(d);
  return padd(pmul(one_t2, b), pmul(dt, a));
}

// Dense working tensor with in-place pair updates on every mode.
class TensorState {
 public:
  explicit TensorState(const SymTensor& g) : t_(g.expand()), n_(g.dim()), d_(g.order()) {
    diag_stride_ = 0;
    for (auto s : t_.strides()) diag_stride_ += s;
  }
  int n() const { return n_; }
  Eigen::VectorXd entries(int p, int q) const {
    Eigen::VectorXd g(d_ + 1);
    std::vector<std::size_t> idx(static_cast<std::size_t>(d_));
    for (int k = 0; k <= d_; ++k) {
      for (int m = 0; m < d_; ++m) idx[static_cast<std::size_t>(m)] = static_cast<std::size_t>(m < d_ - k ? p : q);
      g(k) = t_(idx);
    }
    return g;
  }
  void apply(int p, int q, double c, double s) {
    auto data = t_.data();
    const auto strides = t_.strides();
    const auto un = static_cast<std::size_t>(n_);
    const auto up = static_cast<std::size_t>(p), uq = static_cast<std::size_t>(q);
    for (int m = 0; m < d_; ++m) {
      const std::size_t st = strides[static_cast<std::size_t>(m)];
      const std::size_t outer = t_.size() / (st * un);
      for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t i = 0; i < st; ++i) {
          const std::size_t base = o * un * st + i;
          double& a = data[base + up * st];
          double& b = data[base + uq * st];
          const double na = c * a + s * b;
          b = -s * a + c * b;
          a = na;
        }
      }
    }
  }
  double contrast(const ContrastSpec& spec) const {
    double sum = 0.0;
    for (int i = 0; i < n_; ++i) sum += h(t_.data()[static_cast<std::size_t>(i) * diag_stride_], spec.alpha);
    return sum;
  }
  SymTensor result() const { return symmetrize(t_); }

 private:
  DenseTensor t_;
  int n_;
  int d_;
  std::size_t diag_stride_;
};

// Standardized samples rotated in place; pair cumulants are re-estimated.
class DataState {
 public:
  DataState(SampleMatrix y, int d, EstimatorOptions est)
      : y_(std::move(y)), d_(d), est_(est), marg_(marginal_cumulants(y_, d)) {}
  int n() const { return static_cast<int>(y_.cols()); }
  Eigen::VectorXd entries(int p, int q) const { return pair_cumulants(y_, p, q, d_); }
  void apply(int p, int q, double c, double s) {
    const Eigen::VectorXd a = y_.col(p);
    y_.col(p) = c * a + s * y_.col(q);
    y_.col(q) = -s * a + c * y_.col(q);
    SampleMatrix two(y_.rows(), 2);
    two << y_.col(p), y_.col(q);
    const Eigen::VectorXd m = marginal_cumulants(two, d_);
    marg_(p) = m(0);
    marg_(q) = m(1);
  }
  double contrast(const ContrastSpec& spec) const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < marg_.size(); ++i) sum += h(marg_(i), spec.alpha);
    return sum;
  }
  SymTensor result() const { return cumulant_tensor(y_, d_, est_); }

 private:
  SampleMatrix y_;
  int d_;
  EstimatorOptions est_;
  Eigen::VectorXd marg_;
};

template <typename State>
void accept(State& st, ICAResult& r, const PairRotation& rot, const ContrastSpec& spec) {
  const double c = std::cos(rot.phi), s = std::sin(rot.phi);
  st.apply(rot.p, rot.q, c, s);
  const Eigen::RowVectorXd qp = r.Q.row(rot.p);
  r.Q.row(rot.p) = c * qp + s * r.Q.row(rot.q);
  r.Q.row(rot.q) = -s * qp + c * r.Q.row(rot.q);
  r.gains.push_back(rot.gain);
  // Accumulate the gains: they are computed without cancellation, while a
  // recomputed contrast cannot resolve changes below its own rounding.
  r.trace.push_back(r.trace.back() + rot.gain);
  ++r.rotations;
}

template <typename State>
ICAResult run_cyclic(State& st, const ContrastSpec& spec, int max_sweeps) {
  const int n = st.n();
  if (max_sweeps <= 0) max_sweeps = default_sweeps(n);
  ICAResult r;
  r.Q = Eigen::MatrixXd::Identity(n, n);
  r.trace.push_back(st.contrast(spec));
  if (n < 2) r.converged = true;
  for (int sweep = 1; sweep <= max_sweeps && !r.converged; ++sweep) {
    double largest = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        PairRotation rot = pair_rotation_optimal(st.entries(p, q), spec);
        if (!(rot.gain > 0.0) || rot.phi == 0.0) continue;
        rot.p = p;
        rot.q = q;
        accept(st, r, rot, spec);
        largest = std::max(largest, std::abs(rot.phi));
      }
    }
    r.sweeps = sweep;
    if (largest < kAngleTol) r.converged = true;
  }
  r.Z = st.result();
  return r;
}

template <typename State>
ICAResult run_greedy(State& st, const ContrastSpec& spec, int max_rotations) {
  const int n = st.n();
  if (max_rotations <= 0) max_rotations = default_sweeps(n) * n * (n - 1) / 2;
  ICAResult r;
  r.Q = Eigen::MatrixXd::Identity(n, n);
  r.trace.push_back(st.contrast(spec));
  if (n < 2) r.converged = true;
  while (!r.converged && r.rotations < max_rotations) {
    PairRotation best;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        PairRotation rot = pair_rotation_optimal(st.entries(p, q), spec);
        if (rot.gain > best.gain && rot.phi != 0.0) {
          best = rot;
          best.p = p;
          best.q = q;
        }
      }
    }
    if (!(best.gain > 0.0)) {
      r.converged = true;
      break;
    }
    accept(st, r, best, spec);
    if (std::abs(best.phi) < kAngleTol) r.converged = true;
  }
  r.Z = st.result();
  return r;
}

double diag(const SymTensor& z, int i) {
  std::vector<int> idx(static_cast<std::size_t>(z.order()), i);
  return z.entry(idx);
}

// Entry with `a` copies of q followed by order - a copies of r.
double mixed(const SymTensor& z, int q, int r, int a) {
  std::vector<int> idx(static_cast<std::size_t>(z.order()), r);
  std::fill_n(idx.begin(), a, q);
  return z.entry(idx);
}

void check_diag_order(const SymTensor& z, int d) {
  if (d < 2 || d > 4) throw std::invalid_argument("order must be 2, 3 or 4");
  if (z.order() != d) throw std::invalid_argument("tensor order does not match d");
}

}  // namespace

void check_contrast(const ContrastSpec& spec) {
  const bool ok = (spec.alpha == 1 && (spec.order == 3 || spec.order == 4)) ||
                  (spec.alpha == 2 && spec.order >= 2 && spec.order <= 4);
  if (!ok)
    throw std::invalid_argument("unsupported contrast (alpha=" + std::to_string(spec.alpha) +
                                ", order=" + std::to_string(spec.order) + ")");
}

double contrast_value(const SymTensor& z, const ContrastSpec& spec) {
  check_contrast(spec);
  if (z.order() != spec.order) throw std::invalid_argument("contrast_value: tensor order does not match the contrast");
  double sum = 0.0;
  for (int i = 0; i < z.dim(); ++i) sum += h(diag(z, i), spec.alpha);
  return sum;
}

double pair_contrast(const Eigen::VectorXd& g, double phi, const ContrastSpec& spec) {
  check_pair_entries(g, spec);
  const int d = spec.order;
  const auto [dp, dq] = diagonal_deltas(g, phi, d);
  return h(g(0) + dp, spec.alpha) + h(g(d) + dq, spec.alpha);
}

double pair_gain(const Eigen::VectorXd& g, double phi, const ContrastSpec& spec) {
  check_pair_entries(g, spec);
  const int d = spec.order;
  const auto [dp, dq] = diagonal_deltas(g, phi, d);
  if (spec.alpha == 1) return dp + dq;
  return dp * (2.0 * g(0) + dp) + dq * (2.0 * g(d) + dq);
}

PairRotation pair_rotation_by_rooting(const Eigen::VectorXd& g, const ContrastSpec& spec) {
  check_pair_entries(g, spec);
  const int d = spec.order;
  // Z_p = cos^d(phi) P(t), Z_q = cos^d(phi) R(t) with t = tan(phi).
  Coeffs pc(d + 1), rc(d + 1);
  for (int k = 0; k <= d; ++k) {
    const double b = static_cast<double>(binomial(d, k));
    pc(k) = b * g(k);
    rc(k) = (k % 2 ? -b : b) * g(d - k);
  }
  Coeffs num;
  if (spec.alpha == 2) {
    num = stationarity(padd(pmul(pc, pc), pmul(rc, rc)), padd(pmul(pc, pderiv(pc)), pmul(rc, pderiv(rc))), d);
  } else {
    const Coeffs sum = padd(pc, rc);
    num = stationarity(sum, pderiv(sum), d);
  }
  const bool full_turn = spec.alpha == 1 && d % 2 == 1;
  std::vector<double> candidates{0.0, kHalfPi};
  if (full_turn) candidates.insert(candidates.end(), {std::numbers::pi, -kHalfPi});
  const Coeffs dnum = pderiv(num);
  for (const auto& z : polynomial_roots(num, 1e-14).finite) {
    if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z.real()))) continue;
    double t = z.real();
    for (int it = 0; it < 3; ++it) {
      const double dv = polyval(dnum, t);
      if (dv == 0.0) break;
      const double step = polyval(num, t) / dv;
      if (!std::isfinite(step)) break;
      t -= step;
    }
    candidates.push_back(std::atan(t));
    if (full_turn) candidates.push_back(std::atan(t) + std::numbers::pi);
  }
  double best_phi = 0.0, best_gain = 0.0;
  for (double phi : candidates) {
    const double gn = pair_gain(g, phi, spec);
    if (gn > best_gain) {
      best_gain = gn;
      best_phi = phi;
    }
  }
  if (best_gain <= 0.0) return {};
  return finalize(best_phi, g, spec);
}

PairRotation pair_rotation_optimal(const Eigen::VectorXd& g, const ContrastSpec& spec) {
  check_pair_entries(g, spec);
  const bool rooted = (spec.alpha == 2 && spec.order == 4) || (spec.alpha == 1 && spec.order == 3);
  return rooted ? pair_rotation_by_rooting(g, spec) : quadratic_form_route(g, spec);
}

PairRotation pair_rotation_optimal(const SymTensor& g, int p, int q, const ContrastSpec& spec) {
  check_contrast(spec);
  if (g.order() != spec.order) throw std::invalid_argument("pair_rotation_optimal: order mismatch");
  if (p == q || p < 0 || q < 0 || p >= g.dim() || q >= g.dim())
    throw std::invalid_argument("pair_rotation_optimal: need distinct indices in range");
  Eigen::VectorXd e(spec.order + 1);
  for (int k = 0; k <= spec.order; ++k) e(k) = mixed(g, q, p, k);
  PairRotation r = pair_rotation_optimal(e, spec);
  r.p = p;
  r.q = q;
  return r;
}

ICAResult sweep_cyclic(const SymTensor& g, const ContrastSpec& spec, int max_sweeps) {
  check_contrast(spec);
  if (g.order() != spec.order) throw std::invalid_argument("sweep_cyclic: order mismatch");
  TensorState st(g);
  return run_cyclic(st, spec, max_sweeps);
}

ICAResult sweep_greedy(const SymTensor& g, const ContrastSpec& spec, int max_rotations) {
  check_contrast(spec);
  if (g.order() != spec.order) throw std::invalid_argument("sweep_greedy: order mismatch");
  TensorState st(g);
  return run_greedy(st, spec, max_rotations);
}

double stationarity_residual(const SymTensor& z, int d) {
  check_diag_order(z, d);
  double worst = 0.0;
  for (int q = 0; q < z.dim(); ++q) {
    for (int r = q + 1; r < z.dim(); ++r) {
      // Z_{q..q} Z_{q..qr} - Z_{r..r} Z_{qr..r}; for d = 2 this is (Z_qq - Z_rr) Z_qr.
      const double v = diag(z, q) * mixed(z, q, r, d - 1) - diag(z, r) * mixed(z, q, r, 1);
      worst = std::max(worst, std::abs(v));
    }
  }
  return worst;
}

double convexity_margin(const SymTensor& z, int d, int q, int r) {
  check_diag_order(z, d);
  if (q == r || q < 0 || r < 0 || q >= z.dim() || r >= z.dim())
    throw std::invalid_argument("convexity_margin: need distinct indices in range");
  auto sq = [](double x) { return x * x; };
  switch (d) {
    case 2:
      return 4.0 * sq(mixed(z, q, r, 1)) - sq(diag(z, q) - diag(z, r));
    case 3: {
      const double qqr = mixed(z, q, r, 2), qrr = mixed(z, q, r, 1);
      return 4.0 * sq(qqr) + 4.0 * sq(qrr) - sq(diag(z, q) - qrr) - sq(diag(z, r) - qqr);
    }
    default: {
      const double qqqr = mixed(z, q, r, 3), qqrr = mixed(z, q, r, 2), qrrr = mixed(z, q, r, 1);
      return 4.5 * sq(qqrr) + 4.0 * sq(qqqr) + 4.0 * sq(qrrr) - sq(diag(z, q) - 1.5 * qqrr) -
             sq(diag(z, r) - 1.5 * qqrr);
    }
  }
}

Whitener whiten_to_rank(const Eigen::MatrixXd& ry, int p) {
  const Eigen::Index n = ry.rows();
  if (ry.cols() != n || n == 0) throw std::invalid_argument("whiten_to_rank: matrix must be square");
  if (p < 1 || p > n) throw std::invalid_argument("whiten_to_rank: rank outside 1..n");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (ry + ry.transpose()));
  const Eigen::VectorXd mu = es.eigenvalues().reverse();
  const Eigen::MatrixXd u = es.eigenvectors().rowwise().reverse();
  const double sigma = p < n ? mu.tail(n - p).mean() : 0.0;
  const double floor = 1e-12 * std::max(1.0, std::abs(mu(0)));
  Whitener w;
  w.transform.resize(p, n);
  for (int i = 0; i < p; ++i) {
    if (mu(i) - sigma <= floor) throw NumericalError("whiten_to_rank: signal eigenvalue not above the noise floor");
    w.transform.row(i) = u.col(i).transpose() / std::sqrt(mu(i) - sigma);
  }
  w.source_count = p;
  w.noise_variance = sigma;
  return w;
}

ICAOutput ica(const SampleMatrix& samples, const ContrastSpec& spec, const ICAOptions& options) {
  check_contrast(spec);
  validate_samples(samples);
  const int n = static_cast<int>(samples.cols());
  if (samples.rows() < 2) throw std::invalid_argument("ica: need at least 2 samples");
  if (options.sources && (*options.sources < 1 || *options.sources > n))
    throw std::invalid_argument("ica: " + std::to_string(*options.sources) + " sources for " + std::to_string(n) +
                                " sensors; more sources than sensors needs the underdetermined route (sylvester)");

  const SampleMatrix y = samples.rowwise() - samples.colwise().mean();
  const Eigen::MatrixXd ry = (y.transpose() * y) / static_cast<double>(y.rows());

  ICAOutput out;
  if (options.detect) {
    out.whitener = detect_sources(ry, std::nullopt, options.detect_threshold).whitener;
    if (out.whitener.source_count == 0) throw NumericalError("ica: no sources detected above the noise level");
  } else if (options.sources && *options.sources < n) {
    out.whitener = whiten_to_rank(ry, *options.sources);
  } else {
    out.whitener = standardize(ry);
  }
  const SampleMatrix ytil = y * out.whitener.transform.transpose();

  if (options.update == UpdateStrategy::kData) {
    DataState st(ytil, spec.order, options.estimator);
    out.result = options.strategy == SweepStrategy::kCyclic ? run_cyclic(st, spec, options.max_sweeps)
                                                            : run_greedy(st, spec, options.max_sweeps);
  } else {
    const SymTensor g = cumulant_tensor(ytil, spec.order, options.estimator);
    out.result = options.strategy == SweepStrategy::kCyclic ? sweep_cyclic(g, spec, options.max_sweeps)
                                                            : sweep_greedy(g, spec, options.max_sweeps);
  }
  out.separator = out.result.Q * out.whitener.transform;
  out.stationarity = stationarity_residual(out.result.Z, spec.order);

  if (spec.order >= 3) {
    out.confidence_floor = 5.0 * std::sqrt(static_cast<double>(factorial(spec.order)) / static_cast<double>(y.rows()));
    double largest = 0.0;
    for (int i = 0; i < out.result.Z.dim(); ++i) largest = std::max(largest, std::abs(diag(out.result.Z, i)));
    out.low_confidence = largest < out.confidence_floor;
  }
  return out;
}

}  // namespace tbss
