#include "qhdef/charts.hpp"

#include <stdexcept>

namespace qhdef {

namespace {

void require_inside(const RVec& u, double radius) {
  if (u.norm() >= radius)
    throw std::domain_error("finite-difference stencil left the chart domain");
}

}  // namespace

RMat fd_jacobian(const std::function<RVec(const RVec&)>& f, const RVec& u,
                 double step, double domain_radius) {
  if (!(step > 0)) throw std::invalid_argument("fd_jacobian: step must be positive");
  const int m = static_cast<int>(u.size());
  RMat jac;
  for (int k = 0; k < m; ++k) {
    RVec up = u, dn = u;
    up(k) += step;
    dn(k) -= step;
    require_inside(up, domain_radius);
    require_inside(dn, domain_radius);
    RVec col = (f(up) - f(dn)) / (2.0 * step);
    if (jac.size() == 0) jac.resize(col.size(), m);
    jac.col(k) = col;
  }
  return jac;
}

double ext_deriv_2form(const TwoForm& w, const RVec& u, int i, int j, int k,
                       double step, double domain_radius) {
  if (!(step > 0)) throw std::invalid_argument("ext_deriv_2form: step must be positive");
  auto partial = [&](int dir, int a, int b) {
    RVec up = u, dn = u;
    up(dir) += step;
    dn(dir) -= step;
    require_inside(up, domain_radius);
    require_inside(dn, domain_radius);
    return (w(up, a, b) - w(dn, a, b)) / (2.0 * step);
  };
  return partial(i, j, k) - partial(j, i, k) + partial(k, i, j);
}

GramRank gram_rank(const TwoForm& w, const RVec& u, int dim, double tol) {
  GramRank out;
  if (dim == 0) {
    out.singular_values = RVec(0);
    return out;
  }
  RMat gram(dim, dim);
  for (int i = 0; i < dim; ++i) {
    gram(i, i) = 0.0;
    for (int j = i + 1; j < dim; ++j) {
      const double v = w(u, i, j);
      gram(i, j) = v;
      gram(j, i) = -v;
    }
  }
  Eigen::JacobiSVD<RMat> svd(gram, Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  const double top = out.singular_values.maxCoeff();
  const double cutoff = tol * (top > tol ? top : 1.0);
  for (int i = 0; i < dim; ++i) {
    if (out.singular_values(i) > cutoff)
      ++out.rank;
    else
      out.kernel.push_back(svd.matrixV().col(i));
  }
  return out;
}

double wedge_pair(const GroupModel& model, const AlgebraVector& a1_on_u,
                  const AlgebraVector& a1_on_v, const AlgebraVector& a2_on_u,
                  const AlgebraVector& a2_on_v) {
  return model.pair(a1_on_u, a2_on_v) - model.pair(a1_on_v, a2_on_u);
}

}  // namespace qhdef
