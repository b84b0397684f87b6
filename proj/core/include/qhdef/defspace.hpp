#pragma once

#include "qhdef/liegroup.hpp"

namespace qhdef {

/// Point of the deformation space of G to g: a group element over t != 0, an
/// algebra vector over t = 0.
struct DefPoint {
  double t = 1.0;
  Mat payload;
  bool is_group() const { return t != 0.0; }
};

/// phi-chart coordinate of a DefPoint: (x, t) with phi(x, t) = (exp(tx), t)
/// for t != 0 and (x, 0) on the zero fiber.
struct ChartPoint {
  AlgebraVector x;
  double t = 0.0;
};

DefPoint phi(const GroupModel& model, const ChartPoint& c);

/// Inverse chart: ((1/t) log g, t) for t != 0. Propagates the log domain
/// error when g is outside the principal-log radius.
ChartPoint phi_inv(const GroupModel& model, const DefPoint& p);

/// Conjugation action of G: (g a g^-1, t) on nonzero fibers, (Ad_g x, 0) on
/// the zero fiber.
DefPoint conj_act(const GroupModel& model, const GroupElement& g, const DefPoint& p);

/// Fiberwise multiplication m: (ab, t) for t != 0, (a + b, 0) at t = 0.
/// Throws std::invalid_argument on mismatched t.
DefPoint mul(const GroupModel& model, const DefPoint& p, const DefPoint& q);

/// m in phi-chart coordinates: ((1/t) log(exp(tx) exp(ty)), t) for t != 0 and
/// (x + y, 0) at t = 0. Computed through exact exp/log, not a truncated
/// series.
ChartPoint mul_chart(const GroupModel& model, const ChartPoint& p, const ChartPoint& q);

enum class Side { left, right };

/// Rescaled Maurer-Cartan forms on fiber directions, in phi-chart
/// coordinates: theta_hat^L_(x,t)(v) = dexp_{tx}(v) and
/// theta_hat^R = Ad_{exp(tx)} o theta_hat^L. Both reduce to the identity on
/// the zero fiber. The pullback along a fiber inclusion i_t is (1/t) theta^{L|R}.
AlgebraVector theta_hat(const GroupModel& model, Side side, const ChartPoint& c,
                        const AlgebraVector& v);

/// Fiberwise matrix-norm comparison at equal t.
bool defpoint_equal(const DefPoint& p, const DefPoint& q, double tol = 1e-9);

}  // namespace qhdef
