#include "tbss/sylvester.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "tbss/polyroots.hpp"
#include "tbss/preprocess.hpp"
#include "tbss/rng.hpp"

namespace tbss {

namespace {

constexpr double kZeroCoeff = 1e-13;
constexpr double kDistinct = 1e-8;
constexpr double kWeightResidual = 1e-8;
constexpr int kMaxTernary = 4096;
constexpr int kRandomCombos = 64;

bool nearly_real(Cplx z) { return std::abs(z.imag()) <= 1e-10 * std::max(1.0, std::abs(z.real())); }

double separation(const ProjectiveRoot& a, const ProjectiveRoot& b) {
  const double na = std::sqrt(std::norm(a.x) + std::norm(a.y));
  const double nb = std::sqrt(std::norm(b.x) + std::norm(b.y));
  return std::abs(a.x * b.y - b.x * a.y) / (na * nb);
}

// Reduced row echelon form of the rows of m; a canonical basis of their span.
Eigen::MatrixXd rref(Eigen::MatrixXd m) {
  const double tol = 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff());
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index piv;
    const double best = m.col(col).tail(m.rows() - row).cwiseAbs().maxCoeff(&piv);
    if (best <= tol) continue;
    m.row(row).swap(m.row(row + piv));
    m.row(row) /= m(row, col);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (r != row) m.row(r) -= m(r, col) * m.row(row);
    ++row;
  }
  return m.topRows(row);
}

struct Candidate {
  std::vector<WaringTerm> terms;
  double residual;
  bool real;
};

std::optional<Candidate> try_kernel_vector(const BinaryQuantic& p, const Eigen::VectorXd& g, bool& any_distinct) {
  if (g.norm() == 0.0) return std::nullopt;
  const QRoots r = roots_of_q(g);
  if (!r.distinct) return std::nullopt;
  any_distinct = true;
  WeightSolve ws;
  try {
    ws = solve_weights(p, r.roots);
  } catch (const NumericalError&) {
    return std::nullopt;
  }
  if (!(ws.residual <= kWeightResidual)) return std::nullopt;
  std::vector<WaringTerm> terms;
  for (std::size_t j = 0; j < r.roots.size(); ++j)
    terms.push_back({ws.lambda(static_cast<Eigen::Index>(j)), r.roots[j].x, r.roots[j].y});
  terms = normalize_terms(std::move(terms), p.degree());
  bool real = true;
  for (const auto& t : terms) real = real && nearly_real(t.lambda) && nearly_real(t.alpha) && nearly_real(t.beta);
  if (real)
    for (auto& t : terms) t = {t.lambda.real(), t.alpha.real(), t.beta.real()};
  return Candidate{std::move(terms), ws.residual, real};
}

// Kernel combinations in the documented order.
std::vector<Eigen::VectorXd> kernel_candidates(const Eigen::MatrixXd& basis_rows) {
  const auto k = basis_rows.rows();
  std::vector<Eigen::VectorXd> out;
  if (k == 1) {
    out.push_back(basis_rows.row(0).transpose());
    return out;
  }
  if (k == 2) {
    for (int j = 0; j <= 180; ++j) {
      const double t = j * std::numbers::pi / 180.0;
      out.push_back((std::cos(t) * basis_rows.row(0) + std::sin(t) * basis_rows.row(1)).transpose());
    }
    return out;
  }
  // Supports of increasing size in lexicographic order; first coefficient +1,
  // the others +1 before -1.
  for (Eigen::Index s = 1; s <= k && static_cast<int>(out.size()) < kMaxTernary; ++s) {
    std::vector<bool> mask(static_cast<std::size_t>(k), false);
    std::fill(mask.begin(), mask.begin() + s, true);
    do {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index i = 0; i < k; ++i)
        if (mask[static_cast<std::size_t>(i)]) idx.push_back(i);
      for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << (s - 1)); ++signs) {
        Eigen::VectorXd g = basis_rows.row(idx[0]).transpose();
        for (Eigen::Index m = 1; m < s; ++m) {
          const double sg = (signs >> (s - 1 - m)) & 1 ? -1.0 : 1.0;
          g += sg * basis_rows.row(idx[static_cast<std::size_t>(m)]).transpose();
        }
        out.push_back(std::move(g));
        if (static_cast<int>(out.size()) >= kMaxTernary) break;
      }
    } while (std::prev_permutation(mask.begin(), mask.end()) && static_cast<int>(out.size()) < kMaxTernary);
  }
  Rng rng(0x5eed);
  for (int i = 0; i < kRandomCombos; ++i) out.push_back(basis_rows.transpose() * rng.normal_vector(k));
  return out;
}

}  // namespace

BinaryQuantic BinaryQuantic::from_poly(const HomogPoly& p) {
  if (p.nvars() != 2) throw std::invalid_argument("binary quantic: polynomial must have 2 variables");
  BinaryQuantic q;
  q.gamma.resize(p.degree() + 1);
  for (int i = 0; i <= p.degree(); ++i) q.gamma(i) = p.gamma({i, p.degree() - i});
  return q;
}

HomogPoly BinaryQuantic::to_poly() const {
  HomogPoly p(2, degree());
  for (int i = 0; i <= degree(); ++i) p.set_gamma({i, degree() - i}, gamma(i));
  return p;
}

Eigen::MatrixXd hankel_matrix(const BinaryQuantic& p, int omega) {
  const int d = p.degree();
  if (d < 1) throw std::invalid_argument("hankel_matrix: degree must be >= 1");
  if (omega < 1 || omega > d) throw std::invalid_argument("hankel_matrix: omega outside 1..d");
  Eigen::MatrixXd h(d - omega + 1, omega + 1);
  for (int r = 0; r < h.rows(); ++r)
    for (int c = 0; c < h.cols(); ++c) h(r, c) = p.gamma(r + c);
  return h;
}

Eigen::MatrixXd kernel_vectors(const Eigen::MatrixXd& h, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  if (sv.size() && sv(0) > 0)
    while (rank < sv.size() && sv(rank) > rel_tol * sv(0)) ++rank;
  return svd.matrixV().rightCols(h.cols() - rank);
}

QRoots roots_of_q(const Eigen::VectorXd& g) {
  const double ng = g.norm();
  if (ng == 0.0) throw std::invalid_argument("roots_of_q: zero polynomial");
  Eigen::VectorXd gz = g;
  for (Eigen::Index l = 0; l < gz.size(); ++l)
    if (std::abs(gz(l)) <= kZeroCoeff * ng) gz(l) = 0.0;
  // Dehomogenize at y = 1; each dropped leading power of x is a root (1 : 0).
  const PolyRoots pr = polynomial_roots(gz, 0.0);
  QRoots out;
  out.real = true;
  for (auto x : pr.finite) {
    if (nearly_real(x)) x = x.real();
    else out.real = false;
    out.roots.push_back({x, 1.0});
  }
  for (int i = 0; i < pr.infinite; ++i) out.roots.push_back({1.0, 0.0});
  out.distinct = true;
  for (std::size_t a = 0; a < out.roots.size(); ++a)
    for (std::size_t b = a + 1; b < out.roots.size(); ++b)
      if (!(separation(out.roots[a], out.roots[b]) > kDistinct)) out.distinct = false;
  return out;
}

WeightSolve solve_weights(const BinaryQuantic& p, const std::vector<ProjectiveRoot>& forms) {
  const int d = p.degree();
  const auto w = static_cast<Eigen::Index>(forms.size());
  if (w == 0) throw std::invalid_argument("solve_weights: no forms");
  Eigen::MatrixXcd v(d + 1, w);
  for (Eigen::Index j = 0; j < w; ++j) {
    const auto& f = forms[static_cast<std::size_t>(j)];
    for (int i = 0; i <= d; ++i) v(i, j) = std::pow(f.x, i) * std::pow(f.y, d - i);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(v);
  if (cod.rank() < w) throw NumericalError("solve_weights: proportional forms make the system singular");
  const Eigen::VectorXcd rhs = p.gamma.cast<Cplx>();
  WeightSolve out;
  out.lambda = cod.solve(rhs);
  const double ng = p.gamma.norm();
  const double err = (v * out.lambda - rhs).norm();
  out.residual = ng > 0 ? err / ng : err;
  return out;
}

std::vector<WaringTerm> normalize_terms(std::vector<WaringTerm> terms, int d) {
  for (auto& t : terms) {
    const double s = std::max(std::abs(t.alpha), std::abs(t.beta));
    if (s == 0.0) continue;
    const bool lead_alpha = std::abs(t.alpha) > 1e-12 * s;
    const Cplx u = lead_alpha ? t.alpha : t.beta;
    const Cplx scale = s * (u / std::abs(u));
    t.alpha /= scale;
    t.beta /= scale;
    (lead_alpha ? t.alpha : t.beta) = std::abs(u) / s;
    t.lambda *= std::pow(scale, d);
  }
  std::sort(terms.begin(), terms.end(), [](const WaringTerm& a, const WaringTerm& b) {
    const std::array<double, 4> ka{a.alpha.real(), a.beta.real(), a.alpha.imag(), a.beta.imag()};
    const std::array<double, 4> kb{b.alpha.real(), b.beta.real(), b.alpha.imag(), b.beta.imag()};
    return ka > kb;
  });
  return terms;
}

Eigen::VectorXcd waring_gamma(const std::vector<WaringTerm>& terms, int d) {
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(d + 1);
  for (const auto& t : terms)
    for (int i = 0; i <= d; ++i) g(i) += t.lambda * std::pow(t.alpha, i) * std::pow(t.beta, d - i);
  return g;
}

WaringDecomposition cand_binary(const BinaryQuantic& p) {
  const int d = p.degree();
  if (d < 1) throw std::invalid_argument("cand_binary: degree must be >= 1");
  if (!p.gamma.allFinite()) throw std::invalid_argument("cand_binary: non-finite coefficient");
  if (p.gamma.norm() == 0.0) throw std::invalid_argument("cand_binary: zero quantic");

  WaringDecomposition out;
  for (int omega = 1; omega <= d; ++omega) {
    const Eigen::MatrixXd k = kernel_vectors(hankel_matrix(p, omega));
    const int kdim = static_cast<int>(k.cols());
    if (kdim == 0) {
      out.attempts.push_back({omega, 0, "empty kernel"});
      continue;
    }
    bool any_distinct = false;
    std::optional<Candidate> complex_choice;
    std::optional<Candidate> chosen;
    for (const auto& g : kernel_candidates(rref(k.transpose()))) {
      auto c = try_kernel_vector(p, g, any_distinct);
      if (!c) continue;
      if (c->real) {
        chosen = std::move(c);
        break;
      }
      if (!complex_choice) complex_choice = std::move(c);
    }
    if (!chosen) chosen = std::move(complex_choice);
    if (!chosen) {
      out.attempts.push_back({omega, kdim, any_distinct ? "inconsistent weights" : "repeated roots"});
      continue;
    }
    out.attempts.push_back({omega, kdim, chosen->real ? "accepted (real)" : "accepted (complex)"});
    out.terms = std::move(chosen->terms);
    out.rank = omega;
    out.real = chosen->real;
    out.kernel_dim = kdim;
    const Eigen::VectorXcd rec = waring_gamma(out.terms, d);
    out.residual = (rec - p.gamma.cast<Cplx>()).norm() / p.gamma.norm();
    return out;
  }
  throw NumericalError("cand_binary: no Waring decomposition with distinct forms up to rank d");
}

GenericBinaryRank generic_rank_binary(int d) {
  if (d < 1) throw std::invalid_argument("generic_rank_binary: degree must be >= 1");
  return d % 2 ? GenericBinaryRank{(d + 1) / 2, 1} : GenericBinaryRank{d / 2 + 1, 2};
}

}  // namespace tbss
