#pragma once
// Best rank-1 approximation of symmetric tensors by the symmetric power
// (tensor Rayleigh) iteration w <- C . w^(d-1), w <- w / ||w||, and the
// two-stage structured solve that restores rank-1 structure after a linear
// least-squares step.

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "tbss/tensor.hpp"

namespace tbss {

struct Rank1Approx {
  Eigen::VectorXd w;  ///< unit vector, largest-magnitude component positive
  double sigma = 0.0;
  int iterations = 0;
  bool converged = false;
  int zero_restarts = 0;  ///< restarts forced by a vanishing contraction
  bool shifted = false;   ///< the plain iteration stalled and the shifted one took over

  /// (w, sigma) and (-w, (-1)^d sigma) are the same approximation.
  bool same_as(const Rank1Approx& other, int d, double tol) const;
};

/// C contracted with w on d - 1 modes; for d = 2 the matrix-vector product.
Eigen::VectorXd contract_to_vector(const SymTensor& c, const Eigen::VectorXd& w);

/// C contracted with w on every mode.
double sigma_of(const SymTensor& c, const Eigen::VectorXd& w);

struct OmegaCriteria {
  double omega0;    ///< ||C - sigma w^(x)d|| with the sigma passed in
  double omega_dm1; ///< ||C . w^(d-1) - lambda w||, lambda = sigma_of(C, w)
  double omega_d;   ///< |sigma_of(C, w)|
};

OmegaCriteria omega_criteria(const SymTensor& c, const Eigen::VectorXd& w, double sigma);

enum class Rank1Init { kHosvd, kRandom };

struct Rank1Config {
  double tol = 1e-10;  ///< on ||w_next - s w||, s = +-1 aligning the signs
  int max_iters = 500;
  Rank1Init init = Rank1Init::kHosvd;
  int restarts = 5;  ///< extra random starts in best_rank1
  std::uint64_t seed = 0;
  bool parallel = true;
  int shifted_iters = 20000;  ///< budget of the shifted fallback
};

/// Runs the iteration from `init`. A vanishing contraction restarts from a
/// seeded perturbation of the current point (at most 10 times, then
/// NumericalError). If max_iters pass without convergence the iteration
/// continues with a convexity shift, which cannot cycle.
Rank1Approx rayleigh_iterate(const SymTensor& c, const Eigen::VectorXd& init, const Rank1Config& cfg = {});

/// Dominant left singular vector of the mode-0 unfolding.
Eigen::VectorXd hosvd_init(const SymTensor& c);

struct Rank1Search {
  Rank1Approx best;
  std::vector<Rank1Approx> runs;  ///< run 0 uses cfg.init, runs 1.. are random
  int winner = 0;  ///< converged first, then largest |sigma|, ties to the lowest index
};

/// One run from cfg.init plus cfg.restarts random starts (run r seeded with
/// seed + r), executed in parallel when cfg.parallel is set.
Rank1Search best_rank1(const SymTensor& c, const Rank1Config& cfg = {});

struct Rank1Triple {
  Eigen::VectorXd a, b, c;
  double sigma = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Non-symmetric order-3 variant updating three separate unit vectors in turn.
Rank1Triple rayleigh_iterate_nonsym(const DenseTensor& t, const Eigen::VectorXd& a0, const Eigen::VectorXd& b0,
                                    const Eigen::VectorXd& c0, const Rank1Config& cfg = {});

/// Rows sym_kronecker(y_n, d) of the N x n sample matrix, so that
/// (f^T y_n)^d = row_n . sym_kronecker(f, d).
Eigen::MatrixXd structured_system(const Eigen::MatrixXd& samples, int d);

struct StructuredSolution {
  Eigen::VectorXd f;  ///< sigma^(1/d) w; for even d with sigma < 0, |sigma|^(1/d) w
  Eigen::VectorXd packed;  ///< stage-1 minimum-norm solution
  SymTensor unstructured;  ///< the same solution as a symmetric tensor
  Rank1Approx approx;
  double linear_residual = 0.0;      ///< ||Y x - rhs|| / ||rhs||
  double projection_residual = 0.0;  ///< ||F - sigma w^(x)d|| / ||F||
  int kernel_dim = 0;                ///< columns minus numerical rank of Y
  bool negative_even_sigma = false;
};

/// Stage 1: minimum-norm least squares Y x = rhs. Stage 2: best rank-1
/// approximation of the unpacked tensor. Throws NumericalError when Y has
/// numerical rank 0.
StructuredSolution structured_solve(const Eigen::MatrixXd& y, const Eigen::VectorXd& rhs, int n, int d,
                                    const Rank1Config& cfg = {});

}  // namespace tbss
