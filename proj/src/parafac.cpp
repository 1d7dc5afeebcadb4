#include "tbss/parafac.hpp"

#include <cmath>
#include <stdexcept>

#include "tbss/rankref.hpp"
#include "tbss/rng.hpp"

namespace tbss {

namespace {

void check_shapes(const DenseTensor& g, const KruskalFactors& f) {
  if (g.order() != 3) throw std::invalid_argument("parafac: tensor must have order 3");
  const auto r = f.A.cols();
  if (r < 1 || f.B.cols() != r || f.C.cols() != r) throw std::invalid_argument("parafac: factor ranks differ");
  if (static_cast<std::size_t>(f.A.rows()) != g.dim(0) || static_cast<std::size_t>(f.B.rows()) != g.dim(1) ||
      static_cast<std::size_t>(f.C.rows()) != g.dim(2))
    throw std::invalid_argument("parafac: factor rows do not match tensor dimensions");
  if (f.lambda.size() != 0 && f.lambda.size() != r) throw std::invalid_argument("parafac: weight count mismatch");
}

// argmin_X ||X K^T - U|| with minimum norm, i.e. X = U (K^T)^+.
Eigen::MatrixXd ls_update(const Eigen::MatrixXd& unfolding, const Eigen::MatrixXd& kr, bool& deficient) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(kr);
  if (cod.rank() < kr.cols()) deficient = true;
  return cod.solve(unfolding.transpose()).transpose();
}

Eigen::MatrixXd weighted_a(const KruskalFactors& f) {
  return f.lambda.size() ? Eigen::MatrixXd(f.A * f.lambda.asDiagonal()) : f.A;
}

Eigen::MatrixXd svd_factor(const DenseTensor& g, int mode, int r, Rng& rng) {
  const Eigen::MatrixXd u = mode_n_unfold(g, mode);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(u, Eigen::ComputeThinU);
  Eigen::MatrixXd f(u.rows(), r);
  const auto avail = std::min<Eigen::Index>(svd.matrixU().cols(), r);
  f.leftCols(avail) = svd.matrixU().leftCols(avail);
  for (Eigen::Index j = avail; j < r; ++j) f.col(j) = rng.normal_vector(u.rows());
  return f;
}

}  // namespace

Eigen::MatrixXd khatri_rao(const Eigen::MatrixXd& b, const Eigen::MatrixXd& c) {
  if (b.cols() != c.cols()) throw std::invalid_argument("khatri_rao: column counts differ");
  Eigen::MatrixXd out(b.rows() * c.rows(), b.cols());
  for (Eigen::Index p = 0; p < b.cols(); ++p)
    for (Eigen::Index j = 0; j < b.rows(); ++j) out.col(p).segment(j * c.rows(), c.rows()) = b(j, p) * c.col(p);
  return out;
}

DenseTensor reconstruct(const KruskalFactors& f) {
  const auto n1 = f.A.rows(), n2 = f.B.rows(), n3 = f.C.rows();
  const Eigen::MatrixXd unf = weighted_a(f) * khatri_rao(f.B, f.C).transpose();
  std::vector<double> data(static_cast<std::size_t>(n1 * n2 * n3));
  // Row i of the mode-0 unfolding is exactly the row-major slab i.
  for (Eigen::Index i = 0; i < n1; ++i)
    for (Eigen::Index col = 0; col < n2 * n3; ++col) data[static_cast<std::size_t>(i * n2 * n3 + col)] = unf(i, col);
  return DenseTensor({static_cast<std::size_t>(n1), static_cast<std::size_t>(n2), static_cast<std::size_t>(n3)},
                     std::move(data));
}

double relative_fit(const DenseTensor& g, const KruskalFactors& f) {
  check_shapes(g, f);
  const double err = (g - reconstruct(f)).norm();
  const double ng = g.norm();
  return ng > 0 ? err / ng : err;
}

KruskalFactors normalize(const KruskalFactors& f) {
  KruskalFactors out = f;
  const auto r = f.A.cols();
  out.lambda = f.lambda.size() ? f.lambda : Eigen::VectorXd::Ones(r);
  for (Eigen::Index p = 0; p < r; ++p) {
    double w = out.lambda(p);
    for (Eigen::MatrixXd* m : {&out.A, &out.B, &out.C}) {
      const double nrm = m->col(p).norm();
      w *= nrm;
      if (nrm > 0) m->col(p) /= nrm;
    }
    for (Eigen::MatrixXd* m : {&out.A, &out.B}) {
      Eigen::Index k;
      m->col(p).cwiseAbs().maxCoeff(&k);
      if ((*m)(k, p) < 0) {
        m->col(p) = -m->col(p);
        out.C.col(p) = -out.C.col(p);
      }
    }
    if (w < 0) {
      w = -w;
      out.C.col(p) = -out.C.col(p);
    }
    out.lambda(p) = w;
  }
  return out;
}

KruskalFactors als_step(const DenseTensor& g, const KruskalFactors& f, ALSStepInfo* info) {
  check_shapes(g, f);
  bool deficient = false;
  KruskalFactors out;
  out.B = f.B;
  out.C = f.C;
  out.A = ls_update(mode_n_unfold(g, 0), khatri_rao(out.B, out.C), deficient);
  out.B = ls_update(mode_n_unfold(g, 1), khatri_rao(out.A, out.C), deficient);
  out.C = ls_update(mode_n_unfold(g, 2), khatri_rao(out.A, out.B), deficient);
  if (info) info->rank_deficient = deficient;
  return out;
}

KruskalFactors als_step_symmetric(const DenseTensor& g, const KruskalFactors& f, ALSStepInfo* info) {
  check_shapes(g, f);
  if (g.dim(0) != g.dim(1) || g.dim(0) != g.dim(2)) throw std::invalid_argument("parafac: symmetric step needs a cube");
  bool deficient = false;
  KruskalFactors out;
  // With tied factors the weights act as a cube-root scale on each mode.
  Eigen::MatrixXd a = f.A;
  if (f.lambda.size())
    for (Eigen::Index p = 0; p < a.cols(); ++p) a.col(p) *= std::cbrt(f.lambda(p));
  const Eigen::MatrixXd x = ls_update(mode_n_unfold(g, 0), khatri_rao(a, a), deficient);
  // x_p = s_p a_p^new with a_p^new o a_p^new o a_p^new ~ x_p o a_p o a_p; match
  // the scale of a rank-1 symmetric term by taking the cube root of s_p / |a_p|^2.
  out.A = x;
  for (Eigen::Index p = 0; p < x.cols(); ++p) {
    const double na = a.col(p).squaredNorm();
    const double nx = x.col(p).norm();
    if (na > 0 && nx > 0) out.A.col(p) = x.col(p) / nx * std::cbrt(nx * na);
  }
  out.B = out.A;
  out.C = out.A;
  if (info) info->rank_deficient = deficient;
  return out;
}

KruskalFactors als_initial(const DenseTensor& g, const ALSConfig& cfg) {
  if (g.order() != 3) throw std::invalid_argument("parafac: tensor must have order 3");
  if (cfg.rank < 1) throw std::invalid_argument("parafac: rank must be >= 1");
  Rng rng(cfg.seed);
  KruskalFactors f;
  if (cfg.init == ALSInit::kSvd) {
    f.A = svd_factor(g, 0, cfg.rank, rng);
    f.B = cfg.symmetric ? f.A : svd_factor(g, 1, cfg.rank, rng);
    f.C = cfg.symmetric ? f.A : svd_factor(g, 2, cfg.rank, rng);
  } else {
    f.A = rng.normal_matrix(static_cast<Eigen::Index>(g.dim(0)), cfg.rank);
    f.B = cfg.symmetric ? f.A : rng.normal_matrix(static_cast<Eigen::Index>(g.dim(1)), cfg.rank);
    f.C = cfg.symmetric ? f.A : rng.normal_matrix(static_cast<Eigen::Index>(g.dim(2)), cfg.rank);
  }
  return f;
}

ALSResult als(const DenseTensor& g, const ALSConfig& cfg) { return als(g, cfg, als_initial(g, cfg)); }

ALSResult als(const DenseTensor& g, const ALSConfig& cfg, const KruskalFactors& init) {
  check_shapes(g, init);
  if (cfg.rank != init.rank()) throw std::invalid_argument("parafac: init rank differs from config");
  ALSResult res;
  const auto& d = g.dims();
  if (static_cast<std::uint64_t>(cfg.rank) > howell_bound(d))
    res.warnings.push_back("rank exceeds the Howell bound max n_i n_j = " + std::to_string(howell_bound(d)));
  const double uniq = static_cast<double>(d[0] + d[1] + d[2]) / 2.0 - 1.0;
  if (cfg.rank > uniq)
    res.warnings.push_back("rank exceeds (n1 + n2 + n3) / 2 - 1; the decomposition need not be essentially unique");

  KruskalFactors f = init;
  res.fit.push_back(relative_fit(g, f));
  for (int it = 0; it < cfg.max_iters; ++it) {
    ALSStepInfo info;
    f = cfg.symmetric ? als_step_symmetric(g, f, &info) : als_step(g, f, &info);
    res.rank_deficient = res.rank_deficient || info.rank_deficient;
    const double prev = res.fit.back();
    const double cur = relative_fit(g, f);
    res.fit.push_back(cur);
    res.iterations = it + 1;
    if (cur <= 1e-15 || prev - cur <= cfg.rel_tol * prev) {
      res.converged = true;
      break;
    }
  }
  if (res.rank_deficient) res.warnings.push_back("rank-deficient Khatri-Rao matrix; minimum-norm solution used");
  res.factors = normalize(f);
  return res;
}

FactorMatch factor_congruence(const KruskalFactors& est, const KruskalFactors& truth) {
  const auto r = truth.A.cols();
  if (est.A.cols() != r || est.B.cols() != r || est.C.cols() != r)
    throw std::invalid_argument("factor_congruence: ranks differ");
  auto cosine = [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double den = x.norm() * y.norm();
    return den > 0 ? std::abs(x.dot(y)) / den : 0.0;
  };
  Eigen::MatrixXd score(r, r);  // (truth, est)
  for (Eigen::Index p = 0; p < r; ++p)
    for (Eigen::Index q = 0; q < r; ++q)
      score(p, q) = cosine(truth.A.col(p), est.A.col(q)) * cosine(truth.B.col(p), est.B.col(q)) *
                    cosine(truth.C.col(p), est.C.col(q));
  FactorMatch m;
  m.perm.assign(static_cast<std::size_t>(r), -1);
  m.congruence.assign(static_cast<std::size_t>(r), 0.0);
  std::vector<bool> used_t(static_cast<std::size_t>(r)), used_e(static_cast<std::size_t>(r));
  for (Eigen::Index step = 0; step < r; ++step) {
    double best = -1;
    Eigen::Index bp = 0, bq = 0;
    for (Eigen::Index p = 0; p < r; ++p)
      for (Eigen::Index q = 0; q < r; ++q)
        if (!used_t[static_cast<std::size_t>(p)] && !used_e[static_cast<std::size_t>(q)] && score(p, q) > best) {
          best = score(p, q);
          bp = p;
          bq = q;
        }
    used_t[static_cast<std::size_t>(bp)] = used_e[static_cast<std::size_t>(bq)] = true;
    m.perm[static_cast<std::size_t>(bp)] = static_cast<int>(bq);
    m.congruence[static_cast<std::size_t>(bp)] = best;
  }
  m.min_congruence = r ? *std::min_element(m.congruence.begin(), m.congruence.end()) : 1.0;
  return m;
}

}  // namespace tbss
