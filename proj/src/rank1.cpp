#include "tbss/rank1.hpp"

#include <cmath>
#include <stdexcept>

#include "tbss/preprocess.hpp"
#include "tbss/rng.hpp"

namespace tbss {

namespace {

void check_vector(const SymTensor& c, const Eigen::VectorXd& w) {
  if (w.size() != c.dim()) throw std::invalid_argument("rank1: vector length differs from tensor dimension");
}

double monomial(const MultiIndex& j, const Eigen::VectorXd& w) {
  double v = 1.0;
  for (std::size_t i = 0; i < j.size(); ++i) v *= std::pow(w(static_cast<Eigen::Index>(i)), j[i]);
  return v;
}

void canonical_sign(Eigen::VectorXd& w) {
  Eigen::Index k;
  w.cwiseAbs().maxCoeff(&k);
  if (w(k) < 0) w = -w;
}

}  // namespace

bool Rank1Approx::same_as(const Rank1Approx& o, int d, double tol) const {
  const double flip = d % 2 ? -1.0 : 1.0;
  return ((w - o.w).norm() <= tol && std::abs(sigma - o.sigma) <= tol) ||
         ((w + o.w).norm() <= tol && std::abs(sigma - flip * o.sigma) <= tol);
}

Eigen::VectorXd contract_to_vector(const SymTensor& c, const Eigen::VectorXd& w) {
  check_vector(c, w);
  // C . w^(d-1) is the gradient of C . w^d divided by d.
  const int d = c.order();
  const auto js = enumerate_multi_indices(c.dim(), d);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(c.dim());
  for (std::size_t t = 0; t < js.size(); ++t) {
    const double coeff = static_cast<double>(multiplicity(js[t])) * c.packed()[t];
    if (coeff == 0.0) continue;
    for (int i = 0; i < c.dim(); ++i) {
      if (js[t][static_cast<std::size_t>(i)] == 0) continue;
      MultiIndex j = js[t];
      const int e = j[static_cast<std::size_t>(i)]--;
      out(i) += coeff * e * monomial(j, w);
    }
  }
  return out / static_cast<double>(d);
}

double sigma_of(const SymTensor& c, const Eigen::VectorXd& w) {
  check_vector(c, w);
  const auto js = enumerate_multi_indices(c.dim(), c.order());
  double s = 0.0;
  for (std::size_t t = 0; t < js.size(); ++t)
    s += static_cast<double>(multiplicity(js[t])) * c.packed()[t] * monomial(js[t], w);
  return s;
}

OmegaCriteria omega_criteria(const SymTensor& c, const Eigen::VectorXd& w, double sigma) {
  check_vector(c, w);
  const SymTensor r1 = sym_outer_power(w, c.order());
  std::vector<double> diff(c.packed().begin(), c.packed().end());
  for (std::size_t t = 0; t < diff.size(); ++t) diff[t] -= sigma * r1.packed()[t];
  const double lambda = sigma_of(c, w);
  OmegaCriteria o;
  o.omega0 = SymTensor(c.dim(), c.order(), std::move(diff)).norm();
  o.omega_dm1 = (contract_to_vector(c, w) - lambda * w).norm();
  o.omega_d = std::abs(lambda);
  return o;
}

Rank1Approx rayleigh_iterate(const SymTensor& c, const Eigen::VectorXd& init, const Rank1Config& cfg) {
  check_vector(c, init);
  if (!(init.norm() > 0) || !init.allFinite()) throw std::invalid_argument("rayleigh_iterate: init must be nonzero");
  const double floor = 1e-14 * std::max(c.norm(), 1e-300);
  Rank1Approx out;
  Eigen::VectorXd w = init.normalized();
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int it = 0; it < cfg.max_iters; ++it) {
    Eigen::VectorXd v = contract_to_vector(c, w);
    const double nv = v.norm();
    if (!(nv > floor)) {
      if (++out.zero_restarts > 10) throw NumericalError("rayleigh_iterate: contraction keeps vanishing");
      w = (w + 0.1 * rng.normal_vector(w.size())).normalized();
      continue;
    }
    v /= nv;
    const double s = v.dot(w) < 0 ? -1.0 : 1.0;
    const double disp = (v - s * w).norm();
    w = s * v;
    out.iterations = it + 1;
    if (disp < cfg.tol) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged && out.zero_restarts <= 10) {
    // The plain iteration can cycle. Shifting by alpha w with alpha at least
    // (d - 1) ||C|| makes each step increase s * sigma (s the sign of the
    // current sigma), so the iterates settle on a stationary point.
    const double sgn = sigma_of(c, w) < 0 ? -1.0 : 1.0;
    const double alpha = sgn * (c.order() - 1) * c.norm();
    for (int it = 0; it < cfg.shifted_iters; ++it) {
      const Eigen::VectorXd g = contract_to_vector(c, w);
      // Stop on the stationarity residual itself; a small step alone would
      // leave a residual up to |alpha| times larger.
      if ((g - g.dot(w) * w).norm() <= cfg.tol * std::max(1.0, c.norm())) {
        out.converged = true;
        break;
      }
      Eigen::VectorXd v = g + alpha * w;
      const double nv = v.norm();
      if (!(nv > 0)) break;
      w = v * (sgn / nv);
      ++out.iterations;
    }
    out.shifted = true;
  }
  canonical_sign(w);
  out.w = w;
  out.sigma = sigma_of(c, w);
  return out;
}

Eigen::VectorXd hosvd_init(const SymTensor& c) {
  const Eigen::MatrixXd u = mode_n_unfold(c.expand(), 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(u * u.transpose());
  Eigen::VectorXd w = es.eigenvectors().col(c.dim() - 1);
  canonical_sign(w);
  return w;
}

Rank1Search best_rank1(const SymTensor& c, const Rank1Config& cfg) {
  if (cfg.restarts < 0) throw std::invalid_argument("best_rank1: negative restart count");
  const int runs = cfg.restarts + 1;
  Rank1Search out;
  out.runs.resize(static_cast<std::size_t>(runs));
  std::vector<Eigen::VectorXd> inits(static_cast<std::size_t>(runs));
  for (int r = 0; r < runs; ++r) {
    if (r == 0 && cfg.init == Rank1Init::kHosvd) {
      inits[0] = hosvd_init(c);
    } else {
      Rng rng(cfg.seed + static_cast<std::uint64_t>(r));
      inits[static_cast<std::size_t>(r)] = rng.normal_vector(c.dim());
    }
  }
#pragma omp parallel for schedule(dynamic) if (cfg.parallel && runs > 1)
  for (int r = 0; r < runs; ++r) {
    Rank1Config one = cfg;
    one.seed = cfg.seed + static_cast<std::uint64_t>(r);
    out.runs[static_cast<std::size_t>(r)] = rayleigh_iterate(c, inits[static_cast<std::size_t>(r)], one);
  }
  // Converged runs beat unconverged ones, then the largest |sigma| wins.
  auto better = [](const Rank1Approx& a, const Rank1Approx& b) {
    if (a.converged != b.converged) return a.converged;
    return std::abs(a.sigma) > std::abs(b.sigma);
  };
  for (int r = 1; r < runs; ++r)
    if (better(out.runs[static_cast<std::size_t>(r)], out.runs[static_cast<std::size_t>(out.winner)])) out.winner = r;
  out.best = out.runs[static_cast<std::size_t>(out.winner)];
  return out;
}

Rank1Triple rayleigh_iterate_nonsym(const DenseTensor& t, const Eigen::VectorXd& a0, const Eigen::VectorXd& b0,
                                    const Eigen::VectorXd& c0, const Rank1Config& cfg) {
  if (t.order() != 3) throw std::invalid_argument("rayleigh_iterate_nonsym: tensor must have order 3");
  if (static_cast<std::size_t>(a0.size()) != t.dim(0) || static_cast<std::size_t>(b0.size()) != t.dim(1) ||
      static_cast<std::size_t>(c0.size()) != t.dim(2))
    throw std::invalid_argument("rayleigh_iterate_nonsym: vector lengths differ from tensor dimensions");
  if (!(a0.norm() > 0 && b0.norm() > 0 && c0.norm() > 0))
    throw std::invalid_argument("rayleigh_iterate_nonsym: init vectors must be nonzero");
  const Eigen::MatrixXd u0 = mode_n_unfold(t, 0), u1 = mode_n_unfold(t, 1), u2 = mode_n_unfold(t, 2);
  auto kron = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) { return kronecker(x, y); };
  Rank1Triple out;
  Eigen::VectorXd a = a0.normalized(), b = b0.normalized(), c = c0.normalized();
  auto step = [](Eigen::VectorXd& x, Eigen::VectorXd v) {
    const double nv = v.norm();
    if (!(nv > 0)) throw NumericalError("rayleigh_iterate_nonsym: contraction vanished");
    v /= nv;
    const double s = v.dot(x) < 0 ? -1.0 : 1.0;
    const double disp = (v - s * x).norm();
    x = s * v;
    return disp;
  };
  for (int it = 0; it < cfg.max_iters; ++it) {
    double disp = step(a, u0 * kron(b, c));
    disp = std::max(disp, step(b, u1 * kron(a, c)));
    disp = std::max(disp, step(c, u2 * kron(a, b)));
    out.iterations = it + 1;
    if (disp < cfg.tol) {
      out.converged = true;
      break;
    }
  }
  out.a = a;
  out.b = b;
  out.c = c;
  out.sigma = a.dot(u0 * kron(b, c));
  return out;
}

Eigen::MatrixXd structured_system(const Eigen::MatrixXd& samples, int d) {
  if (d < 1) throw std::invalid_argument("structured_system: order must be >= 1");
  const auto s = static_cast<Eigen::Index>(sym_size(static_cast<int>(samples.cols()), d));
  Eigen::MatrixXd y(samples.rows(), s);
  for (Eigen::Index r = 0; r < samples.rows(); ++r) y.row(r) = sym_kronecker(samples.row(r).transpose(), d).transpose();
  return y;
}

StructuredSolution structured_solve(const Eigen::MatrixXd& y, const Eigen::VectorXd& rhs, int n, int d,
                                    const Rank1Config& cfg) {
  const auto s = static_cast<Eigen::Index>(sym_size(n, d));
  if (y.cols() != s) throw std::invalid_argument("structured_solve: Y must have binom(n + d - 1, d) columns");
  if (rhs.size() != y.rows()) throw std::invalid_argument("structured_solve: rhs length differs from Y rows");
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(y);
  if (cod.rank() == 0) throw NumericalError("structured_solve: Y has numerical rank 0");

  StructuredSolution out;
  out.kernel_dim = static_cast<int>(s - cod.rank());
  out.packed = cod.solve(rhs);
  const double nr = rhs.norm();
  out.linear_residual = nr > 0 ? (y * out.packed - rhs).norm() / nr : (y * out.packed).norm();

  // Packed entries carry sqrt(c(j)); the tensor entry is x_j / sqrt(c(j)).
  const auto js = enumerate_multi_indices(n, d);
  std::vector<double> entries(js.size());
  for (std::size_t t = 0; t < js.size(); ++t)
    entries[t] = out.packed(static_cast<Eigen::Index>(t)) / std::sqrt(static_cast<double>(multiplicity(js[t])));
  out.unstructured = SymTensor(n, d, std::move(entries));

  out.approx = best_rank1(out.unstructured, cfg).best;
  const double sig = out.approx.sigma;
  out.negative_even_sigma = d % 2 == 0 && sig < 0;
  const double mag = std::pow(std::abs(sig), 1.0 / d);
  out.f = (d % 2 == 1 && sig < 0 ? -mag : mag) * out.approx.w;
  const double nf = out.unstructured.norm();
  const double proj = omega_criteria(out.unstructured, out.approx.w, sig).omega0;
  out.projection_residual = nf > 0 ? proj / nf : proj;
  return out;
}

}  // namespace tbss
