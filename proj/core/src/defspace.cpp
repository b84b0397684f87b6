#include "qhdef/defspace.hpp"

#include <stdexcept>

namespace qhdef {

DefPoint phi(const GroupModel& model, const ChartPoint& c) {
  if (c.t == 0.0) return {0.0, c.x.mat};
  return {c.t, model.exp({c.t * c.x.mat}).mat};
}

ChartPoint phi_inv(const GroupModel& model, const DefPoint& p) {
  if (p.t == 0.0) return {{p.payload}, 0.0};
  AlgebraVector l = model.log({p.payload});
  return {{l.mat / p.t}, p.t};
}

DefPoint conj_act(const GroupModel& model, const GroupElement& g, const DefPoint& p) {
  (void)model;
  if (p.t == 0.0) return {0.0, Ad(g, {p.payload}).mat};
  return {p.t, g.mat * p.payload * g.mat.inverse()};
}

DefPoint mul(const GroupModel& model, const DefPoint& p, const DefPoint& q) {
  (void)model;
  if (p.t != q.t)
    throw std::invalid_argument("defspace::mul: points on different fibers");
  if (p.t == 0.0) return {0.0, p.payload + q.payload};
  return {p.t, p.payload * q.payload};
}

ChartPoint mul_chart(const GroupModel& model, const ChartPoint& p, const ChartPoint& q) {
  if (p.t != q.t)
    throw std::invalid_argument("defspace::mul_chart: points on different fibers");
  if (p.t == 0.0) return {{p.x.mat + q.x.mat}, 0.0};
  DefPoint prod = mul(model, phi(model, p), phi(model, q));
  return phi_inv(model, prod);
}

AlgebraVector theta_hat(const GroupModel& model, Side side, const ChartPoint& c,
                        const AlgebraVector& v) {
  AlgebraVector tx{c.t * c.x.mat};
  AlgebraVector l = dexp(tx, v);
  if (side == Side::left) return l;
  return Ad(model.exp(tx), l);
}

bool defpoint_equal(const DefPoint& p, const DefPoint& q, double tol) {
  if (p.t != q.t) return false;
  return (p.payload - q.payload).norm() <= tol;
}

}  // namespace qhdef
