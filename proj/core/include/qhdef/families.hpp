#pragma once

#include "qhdef/fusion.hpp"
#include "qhdef/spaces.hpp"

namespace qhdef {

/**
 * A Hamiltonian deformation family over an open t-interval containing [0,1]:
 * quasi-Hamiltonian fibers with 2-form rescaled by 1/t and pairing (1/t)<.,.>
 * for t != 0, a Hamiltonian fiber at t = 0.
 *
 * The fiber-direction chart is shared across t (coordinates do not move with
 * t); omega is the chart representative of the family 2-form on fiber
 * directions, mu_hat the moment in phi-chart coordinates per factor, and
 * dmu_hat its exact directional derivative. The action is t-independent in
 * these charts.
 */
struct DeformationFamily {
  double t_lo = -1e300;
  double t_hi = 1e300;
  bool t_capped = false;  // interval scan hit its cap; true interval may be larger
  std::vector<GroupModelPtr> factors;
  int chart_dim = 0;
  double domain_radius = 0.3;
  std::function<Point(const RVec&, double)> embed;
  std::function<double(double, const RVec&, int, int)> omega;
  std::function<ChartPoint(int, const RVec&, double)> mu_hat;
  std::function<AlgebraVector(int, const RVec&, double, int)> dmu_hat;
  std::function<RVec(int, const GroupElement&, const RVec&)> act;
  std::function<RVec(int, const AlgebraVector&, const RVec&)> inf_act;

  bool contains(double t) const { return t > t_lo && t < t_hi; }
};

/// Extracts the fiber at t as a structured space (pairing rescale 1/t for
/// t != 0, with the group-valued moment exp(t mu_hat); the Hamiltonian fiber
/// at t = 0 keeps the algebra-valued moment). Throws std::domain_error for t
/// outside the family interval.
StructuredSpace fiber(const DeformationFamily& fam, double t);

/// The family G x G_def deforming the double D(G) to T*G: total chart
/// (alpha, x, t), fiber 2-form
///   <u1, A_t u2> + 1/2(<u1, B_t v2> - <u2, B_t v1>),
/// A_t = (Ad_{e^{-tx}} - Ad_{e^{tx}})/(2t), B_t = (1 + Ad_{e^{tx}}) dexp_{tx}
/// (A_0 = -ad_x, B_0 = 2 id), and exact phi-chart moment
/// (alpha, x) -> (Ad_alpha x, -x) at every t.
DeformationFamily double_family(GroupModelPtr model, GroupElement alpha0);
DeformationFamily double_family(GroupModelPtr model);

/// The family deforming the conjugacy class C_{e^x} to the adjoint orbit O_x,
/// defined over the scanned interval I (grid step 1/64, bisection refinement
/// to 1e-6, symmetric cap) on which dexp_{tx} stays invertible with a
/// conservative singular-value margin — the true interval may be larger.
/// Fiber 2-form <v1, C_t v2> with C_t = (Ad_{e^{ty}} - Ad_{e^{-ty}})/(2t),
/// C_0 = ad_y. Requires [0,1] inside I; throws std::domain_error naming the
/// offending t otherwise.
DeformationFamily conj_family(GroupModelPtr model, const AlgebraVector& x);

/// Product family over the shared t-line.
DeformationFamily product_family(const DeformationFamily& f1, const DeformationFamily& f2);

/// Internal fusion of a deformation family on factors (i, j): every fiber of
/// the result is the internal fusion of the corresponding fiber (t != 0 under
/// the (1/t)-rescaled pairing, t = 0 with summed moments). The family form
/// gains t/2 <mu_hat_i^* theta_hat^L wedge mu_hat_j^* theta_hat^R>, whose
/// pullback to the t-fiber is exactly the fused fiber's correction; the
/// merged moment is m(mu_hat_i, mu_hat_j) in phi-chart coordinates.
DeformationFamily fuse_family(const DeformationFamily& fam, int i, int j);

/// Fusion product of two families: product, then fuse_family on factor i of
/// f1 and factor j of f2.
DeformationFamily external_fuse_family(const DeformationFamily& f1,
                                       const DeformationFamily& f2, int i = 0,
                                       int j = 0);

/// Family deforming the moduli space M(Sigma) (genus g, r+1 boundaries) to
/// T*G^{r+g}: iterated external fusion of r double families and g internally
/// fused double families, left to right.
DeformationFamily moduli_family(GroupModelPtr model, int genus, int boundaries,
                                std::uint64_t base_seed = 0);

}  // namespace qhdef
