#include "tbss/poly.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tbss {

HomogPoly::HomogPoly(int nvars, int degree) : nvars_(nvars), degree_(degree) {
  if (nvars < 1 || degree < 0) throw std::invalid_argument("HomogPoly: need nvars >= 1 and degree >= 0");
}

void HomogPoly::check(const MultiIndex& j) const {
  if (static_cast<int>(j.size()) != nvars_) throw std::invalid_argument("HomogPoly: multi-index length mismatch");
  int s = 0;
  for (int v : j) {
    if (v < 0) throw std::invalid_argument("HomogPoly: negative exponent");
    s += v;
  }
  if (s != degree_) throw std::invalid_argument("HomogPoly: |j| differs from the degree");
}

double HomogPoly::gamma(const MultiIndex& j) const {
  const auto it = coeffs_.find(j);
  return it == coeffs_.end() ? 0.0 : it->second;
}

void HomogPoly::set_gamma(const MultiIndex& j, double value) {
  check(j);
  if (value == 0.0)
    coeffs_.erase(j);
  else
    coeffs_[j] = value;
}

void HomogPoly::add_monomial(const MultiIndex& j, double coefficient) {
  check(j);
  set_gamma(j, gamma(j) + coefficient / static_cast<double>(multiplicity(j)));
}

double HomogPoly::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != nvars_) throw std::invalid_argument("HomogPoly::evaluate: wrong number of variables");
  double s = 0.0;
  for (const auto& [j, g] : coeffs_) {
    double mono = 1.0;
    for (int k = 0; k < nvars_; ++k) mono *= std::pow(x(k), j[static_cast<std::size_t>(k)]);
    s += g * static_cast<double>(multiplicity(j)) * mono;
  }
  return s;
}

SymTensor poly_to_tensor(const HomogPoly& p) {
  SymTensor t(p.nvars(), p.degree());
  for (const auto& [j, g] : p.coeffs()) t.at_multi(j) = g;
  return t;
}

HomogPoly tensor_to_poly(const SymTensor& g) {
  HomogPoly p(g.dim(), g.order());
  const auto js = enumerate_multi_indices(g.dim(), g.order());
  for (std::size_t t = 0; t < js.size(); ++t) p.set_gamma(js[t], g.packed()[t]);
  return p;
}

HomogPoly poly_multiply(const HomogPoly& p, const HomogPoly& q) {
  if (p.nvars() != q.nvars()) throw std::invalid_argument("poly_multiply: variable count mismatch");
  HomogPoly out(p.nvars(), p.degree() + q.degree());
  // Work with plain monomial coefficients gamma * c, which multiply by convolution.
  std::map<MultiIndex, double> mono;
  for (const auto& [jp, gp] : p.coeffs())
    for (const auto& [jq, gq] : q.coeffs()) {
      MultiIndex j(jp.size());
      for (std::size_t k = 0; k < j.size(); ++k) j[k] = jp[k] + jq[k];
      mono[j] += gp * static_cast<double>(multiplicity(jp)) * gq * static_cast<double>(multiplicity(jq));
    }
  for (const auto& [j, a] : mono) out.set_gamma(j, a / static_cast<double>(multiplicity(j)));
  return out;
}

double apolar_inner(const HomogPoly& p, const HomogPoly& q) {
  if (p.nvars() != q.nvars() || p.degree() != q.degree())
    throw std::invalid_argument("apolar_inner: polynomials must share nvars and degree");
  double s = 0.0;
  for (const auto& [j, gp] : p.coeffs()) s += static_cast<double>(multiplicity(j)) * gp * q.gamma(j);
  return s;
}

HomogPoly linear_form_power(const Eigen::VectorXd& a, int d) {
  const int n = static_cast<int>(a.size());
  HomogPoly p(n, d);
  for (const auto& j : enumerate_multi_indices(n, d)) {
    double v = 1.0;
    for (int k = 0; k < n; ++k) v *= std::pow(a(k), j[static_cast<std::size_t>(k)]);
    p.set_gamma(j, v);
  }
  return p;
}

HomogPoly operator+(const HomogPoly& p, const HomogPoly& q) {
  if (p.nvars() != q.nvars() || p.degree() != q.degree())
    throw std::invalid_argument("HomogPoly +: polynomials must share nvars and degree");
  HomogPoly out = p;
  for (const auto& [j, g] : q.coeffs()) out.set_gamma(j, out.gamma(j) + g);
  return out;
}

HomogPoly operator*(double s, const HomogPoly& p) {
  HomogPoly out(p.nvars(), p.degree());
  for (const auto& [j, g] : p.coeffs()) out.set_gamma(j, s * g);
  return out;
}

}  // namespace tbss
