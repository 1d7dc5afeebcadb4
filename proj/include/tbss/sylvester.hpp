#pragma once
// Waring decompositions of binary forms
//   p(x, y) = sum_i gamma_i binom(d, i) x^i y^(d-i) = sum_j lambda_j (alpha_j x + beta_j y)^d
// from the kernels of Hankel matrices built on gamma. A kernel vector g
// defines q(x, y) = sum_l g_l x^l y^(w-l) whose roots (alpha_j : beta_j) are
// the linear forms.

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "tbss/poly.hpp"

namespace tbss {

struct BinaryQuantic {
  Eigen::VectorXd gamma;  ///< gamma_0..gamma_d, gamma_i weighting x^i y^(d-i)

  int degree() const { return static_cast<int>(gamma.size()) - 1; }
  /// Reads gamma_i from the exponent vector (i, d - i) of a 2-variable form.
  static BinaryQuantic from_poly(const HomogPoly& p);
  HomogPoly to_poly() const;
};

/// (d - w + 1) x (w + 1) matrix with H(r, c) = gamma_(r + c). Requires 1 <= w <= d.
Eigen::MatrixXd hankel_matrix(const BinaryQuantic& p, int omega);

/// Orthonormal columns spanning the singular vectors whose singular values
/// are <= rel_tol * sigma_1 (or the whole space when H = 0).
Eigen::MatrixXd kernel_vectors(const Eigen::MatrixXd& h, double rel_tol = 1e-10);

using Cplx = std::complex<double>;

struct ProjectiveRoot {
  Cplx x;
  Cplx y;
};

struct QRoots {
  std::vector<ProjectiveRoot> roots;  ///< (x : y); roots at infinity are (1 : 0)
  bool distinct = false;
  bool real = false;
};

/// Roots of q(x, y) = sum_l g_l x^l y^(w-l), w = g.size() - 1. Coefficients
/// with |g_l| <= 1e-13 ||g|| count as zero. Distinctness uses the projective
/// separation |x1 y2 - x2 y1| / (|r1| |r2|) > 1e-8.
QRoots roots_of_q(const Eigen::VectorXd& g);

struct WeightSolve {
  Eigen::VectorXcd lambda;
  double residual = 0.0;  ///< ||V lambda - gamma|| / ||gamma||
};

/// Least-squares weights for fixed forms: gamma_i = sum_j lambda_j alpha_j^i beta_j^(d-i).
/// Throws NumericalError when the forms make the system rank deficient.
WeightSolve solve_weights(const BinaryQuantic& p, const std::vector<ProjectiveRoot>& forms);

struct WaringTerm {
  Cplx lambda;
  Cplx alpha;
  Cplx beta;
};

struct RankAttempt {
  int omega;
  int kernel_dim;
  std::string outcome;  ///< "empty kernel", "repeated roots", "accepted", ...
};

struct WaringDecomposition {
  std::vector<WaringTerm> terms;
  int rank = 0;
  bool real = true;  ///< all forms and weights real
  double residual = 0.0;
  int kernel_dim = 0;
  std::vector<RankAttempt> attempts;
};

/// Forms scaled to max(|alpha|, |beta|) = 1 with the first nonzero component
/// real positive, the weight absorbing the d-th power of the scale; terms
/// sorted by descending (Re alpha, Re beta, Im alpha, Im beta).
std::vector<WaringTerm> normalize_terms(std::vector<WaringTerm> terms, int d);

/// gamma_i of sum_j lambda_j (alpha_j x + beta_j y)^d.
Eigen::VectorXcd waring_gamma(const std::vector<WaringTerm>& terms, int d);

/// Smallest omega whose Hankel kernel contains a vector with distinct roots and
/// consistent weights (relative residual <= 1e-8). One-dimensional kernels are
/// used as is; two-dimensional kernels are scanned along a fixed 181-angle
/// pencil; larger kernels try {-1, 0, 1} combinations of a canonical basis by
/// increasing support, then seeded random combinations. Real candidates are
/// preferred over complex ones at the same omega. Throws NumericalError when
/// nothing works up to omega = d, std::invalid_argument for p = 0.
WaringDecomposition cand_binary(const BinaryQuantic& p);

struct GenericBinaryRank {
  int omega;
  int kernel_dim;
};
/// ((d + 1) / 2, 1) for odd d, (d / 2 + 1, 2) for even d.
GenericBinaryRank generic_rank_binary(int d);

}  // namespace tbss
