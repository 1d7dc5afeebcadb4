#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace tbss {

struct PolyRoots {
  std::vector<std::complex<double>> finite;
  /// Roots at infinity: leading coefficients treated as zero.
  int infinite = 0;
};

/// Roots of sum_k a[k] t^k via companion-matrix eigenvalues. Leading
/// coefficients with |a_k| <= rel_tol * max|a| are dropped and reported as
/// roots at infinity. The all-zero polynomial yields no roots.
PolyRoots polynomial_roots(const Eigen::VectorXd& ascending, double rel_tol = 0.0);

/// Horner evaluation of an ascending-coefficient polynomial.
template <typename T>
T polyval(const Eigen::VectorXd& ascending, T t) {
  T acc(0);
  for (Eigen::Index k = ascending.size(); k-- > 0;) acc = acc * t + T(ascending(k));
  return acc;
}

}  // namespace tbss
