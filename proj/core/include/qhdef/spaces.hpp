#pragma once

#include "qhdef/charts.hpp"
#include "qhdef/defspace.hpp"
#include "qhdef/liegroup.hpp"

namespace qhdef {

enum class Flavor { quasi_hamiltonian, hamiltonian };

/**
 * A chart-presented (quasi-)Hamiltonian space for a product group: 2-form and
 * moment evaluators in the coordinate frame, plus the action and its exact
 * infinitesimal generators in chart coordinates.
 *
 * moment(u) returns one matrix per factor: a group element for the
 * quasi-Hamiltonian flavor, an algebra vector for the Hamiltonian one.
 * moment_deriv(f, u, k) is the left-trivialized differential
 * theta^L(d mu_f (e_k)) in the quasi-Hamiltonian case and the plain
 * directional derivative d nu_f(e_k) in the Hamiltonian case; all shipped
 * constructions provide it in closed form.
 *
 * pairing_rescale scales the ambient pairing (fibers of a deformation use
 * 1/t); the stored omega already includes its own rescale.
 */
struct StructuredSpace {
  Flavor flavor = Flavor::quasi_hamiltonian;
  std::vector<GroupModelPtr> factors;
  Chart chart;
  TwoForm omega;
  std::function<std::vector<Mat>(const RVec&)> moment;
  std::function<AlgebraVector(int, const RVec&, int)> moment_deriv;
  std::function<RVec(int, const GroupElement&, const RVec&)> act;
  std::function<RVec(int, const AlgebraVector&, const RVec&)> inf_act;
  double pairing_rescale = 1.0;

  int dim() const { return chart.dim; }
};

/**
 * Exponential chart on a group factor: alpha(u) = base * exp(sum u_k b_k).
 * Frames are left trivialized: theta^L of the k-th coordinate field is
 * dexp_{m(u)}(b_k).
 */
class GroupChart {
public:
  GroupChart(GroupModelPtr model, GroupElement base, double radius = 0.3);

  int dim() const { return model_->dim(); }
  double radius() const { return radius_; }
  const GroupModel& model() const { return *model_; }
  const GroupElement& base() const { return base_; }

  GroupElement at(const RVec& u) const;
  /// theta^L of the k-th coordinate field at u.
  AlgebraVector frame(const RVec& u, int k) const;
  /// Chart coordinates of g (via the principal log; throws outside radius).
  RVec coords_of(const GroupElement& g) const;
  /// Coordinates of the tangent with left-trivialized value xi.
  RVec tangent_coords(const RVec& u, const AlgebraVector& xi) const;

private:
  GroupModelPtr model_;
  GroupElement base_;
  Mat base_inv_;
  double radius_;
};

/**
 * Chart on the adjoint orbit O_x: y(s) = Ad_{exp(m(s))} x with m(s) spanned
 * by a transversal {c_k} to the stabilizer, selected by Gram-Schmidt on the
 * infinitesimal-action images [b_k, x] (threshold 1e-8). Central x gives a
 * zero-dimensional chart.
 *
 * The coordinate frame is X_{D_k} with D_k(s) = Ad_{exp(m(s))} dexp_{m(s)}(c_k),
 * so d_k y = [D_k(s), y(s)].
 */
class OrbitChart {
public:
  OrbitChart(GroupModelPtr model, AlgebraVector x, double radius = 0.3);

  int dim() const { return static_cast<int>(transversal_.size()); }
  double radius() const { return radius_; }
  const GroupModel& model() const { return *model_; }
  const AlgebraVector& base() const { return x_; }
  const std::vector<Mat>& transversal() const { return transversal_; }

  AlgebraVector at(const RVec& s) const;
  /// D_k(s): the frame field d_k = X_{D_k} at y(s).
  AlgebraVector frame_generator(const RVec& s, int k) const;
  /// Matrix derivative d_k y = [D_k, y].
  AlgebraVector frame(const RVec& s, int k) const;
  /// Gauss-Newton inversion: s with y(s) = target (throws on failure).
  RVec coords_of(const AlgebraVector& target) const;
  /// Coordinates of an orbit tangent xi at y(s) in the frame {[D_k, y]}.
  RVec tangent_coords(const RVec& s, const AlgebraVector& xi) const;

private:
  GroupModelPtr model_;
  AlgebraVector x_;
  std::vector<Mat> transversal_;
  double radius_;
};

/// The double D(G) = G x G as a quasi-Hamiltonian G x G-space: action
/// (g,h).(alpha,beta) = (g alpha h^-1, h beta h^-1), moment
/// (alpha beta alpha^-1, beta^-1), and the invariant 2-form on
/// left-trivialized tangents
///   1/2(<Ad_b u1,u2> - <Ad_b u2,u1>) + 1/2(<u1, v2+Ad_b v2> - <u2, v1+Ad_b v1>).
StructuredSpace double_space(GroupModelPtr model, GroupElement alpha0, GroupElement beta0);
StructuredSpace double_space(GroupModelPtr model);

/// T*G in the left trivialization G x g, a Hamiltonian G x G-space:
/// sigma((y1,z1),(y2,z2)) = <y1,z2> - <y2,z1> + <x,[y1,y2]>,
/// nu(alpha, x) = (Ad_alpha x, -x).
StructuredSpace tstar_space(GroupModelPtr model, GroupElement alpha0, AlgebraVector x0);
StructuredSpace tstar_space(GroupModelPtr model);

/// Conjugacy class C_a with the conjugation action and
/// omega_f(X_v1, X_v2) = 1/2(<v1, Ad_f v2> - <v2, Ad_f v1>).
/// The group-valued moment is f -> f^-1 (conjugation equivariant); see the
/// sign notes in axioms.hpp. Requires a within the log radius.
StructuredSpace conj_class_space(GroupModelPtr model, const GroupElement& a);

/// Adjoint orbit O_x with sigma_y(X_v1, X_v2) = -<y, [v1, v2]> and
/// algebra-valued moment y -> -y.
StructuredSpace orbit_space(GroupModelPtr model, const AlgebraVector& x);

}  // namespace qhdef
