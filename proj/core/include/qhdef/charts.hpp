#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "qhdef/liegroup.hpp"

namespace qhdef {

/// A point of a structured space: one matrix per slot (group elements and/or
/// algebra vectors, space specific).
using Point = std::vector<Mat>;

/// Chart-local 2-form evaluator on the coordinate frame, antisymmetric in
/// (i, j) by construction.
using TwoForm = std::function<double(const RVec&, int, int)>;

/// Local parameterization of a space: coordinates u with ||u|| < domain_radius
/// map to points.
struct Chart {
  int dim = 0;
  double domain_radius = 0.3;
  std::function<Point(const RVec&)> embed;
};

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Central-difference Jacobian, column k = (f(u+h e_k) - f(u-h e_k)) / (2h).
/// Throws std::domain_error if an evaluation point leaves the chart ball.
RMat fd_jacobian(const std::function<RVec(const RVec&)>& f, const RVec& u,
                 double step, double domain_radius = kUnbounded);

/// Exterior derivative of a 2-form on a coordinate triple:
///   d_i w(.,j,k) - d_j w(.,i,k) + d_k w(.,i,j)
/// by central differences (coordinate fields commute, no bracket terms).
double ext_deriv_2form(const TwoForm& w, const RVec& u, int i, int j, int k,
                       double step, double domain_radius = kUnbounded);

struct GramRank {
  int rank = 0;
  std::vector<RVec> kernel;   // coordinate vectors spanning ker of the Gram matrix
  RVec singular_values;
};

/// Rank of the antisymmetric Gram matrix w(u,i,j) via singular values;
/// values below tol * (largest singular value, or 1 if all tiny) count as zero.
GramRank gram_rank(const TwoForm& w, const RVec& u, int dim, double tol);

/// Pairing wedge of two g-valued 1-forms evaluated on a tangent pair:
/// given a1, a2 on tangents (u, v), returns <a1(u), a2(v)> - <a1(v), a2(u)>.
/// Callers apply the 1/2 prefactor of the fusion form.
double wedge_pair(const GroupModel& model, const AlgebraVector& a1_on_u,
                  const AlgebraVector& a1_on_v, const AlgebraVector& a2_on_u,
                  const AlgebraVector& a2_on_v);

}  // namespace qhdef
