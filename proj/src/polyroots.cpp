#include "tbss/polyroots.hpp"

namespace tbss {

PolyRoots polynomial_roots(const Eigen::VectorXd& a, double rel_tol) {
  PolyRoots out;
  if (a.size() == 0) return out;
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return out;
  Eigen::Index deg = a.size() - 1;
  while (deg > 0 && std::abs(a(deg)) <= rel_tol * scale) {
    --deg;
    ++out.infinite;
  }
  if (deg == 0) return out;
  if (deg == 1) {
    out.finite.emplace_back(-a(0) / a(1), 0.0);
    return out;
  }
  // Frobenius companion matrix of the monic polynomial.
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  comp.block(1, 0, deg - 1, deg - 1).setIdentity();
  comp.col(deg - 1) = -a.head(deg) / a(deg);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  const auto ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) out.finite.push_back(ev(i));
  return out;
}

}  // namespace tbss
