#pragma once

// Homogeneous polynomials in the basis x^j weighted by c(j):
//   p(x) = sum_{|j| = d} gamma(j) c(j) x^j.
// With this convention gamma(j) is exactly the entry of the associated
// symmetric tensor at any index tuple i with f(i) = j.

#include <Eigen/Dense>

#include <map>

#include "tbss/multi_index.hpp"
#include "tbss/tensor.hpp"

namespace tbss {

class HomogPoly {
 public:
  HomogPoly(int nvars, int degree);

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }

  /// Sparse gamma coefficients; absent multi-indices are zero.
  const std::map<MultiIndex, double>& coeffs() const { return coeffs_; }

  double gamma(const MultiIndex& j) const;
  /// Sets gamma(j). Throws if j has the wrong length or |j| != degree.
  void set_gamma(const MultiIndex& j, double value);
  /// Adds `coefficient` * x^j, i.e. gamma(j) += coefficient / c(j).
  void add_monomial(const MultiIndex& j, double coefficient);

  double operator()(const Eigen::VectorXd& x) const { return evaluate(x); }
  double evaluate(const Eigen::VectorXd& x) const;

 private:
  void check(const MultiIndex& j) const;

  int nvars_;
  int degree_;
  std::map<MultiIndex, double> coeffs_;
};

SymTensor poly_to_tensor(const HomogPoly& p);
HomogPoly tensor_to_poly(const SymTensor& g);

HomogPoly poly_multiply(const HomogPoly& p, const HomogPoly& q);

/// sum_j c(j) gamma(j,p) gamma(j,q).
double apolar_inner(const HomogPoly& p, const HomogPoly& q);

/// (a^T x)^d, whose gamma coefficients are a^j.
HomogPoly linear_form_power(const Eigen::VectorXd& a, int d);

HomogPoly operator+(const HomogPoly& p, const HomogPoly& q);
HomogPoly operator*(double s, const HomogPoly& p);

}  // namespace tbss
