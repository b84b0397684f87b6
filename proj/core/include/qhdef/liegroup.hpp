#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace qhdef {

using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// Element of the Lie algebra g, stored as a square matrix in span of the
/// model's algebra basis.
struct AlgebraVector {
  Mat mat;
};

/// Element of the group G, stored as an invertible square matrix.
struct GroupElement {
  Mat mat;
};

class GroupModel;
using GroupModelPtr = std::shared_ptr<const GroupModel>;

/**
 * A concrete matrix Lie group: algebra basis, invariant trace pairing
 * <a,b> = pairing_scale * Re tr(ab), membership checks and tolerances.
 *
 * Shipped models (by_name): "su2", "so3", "t2" (the torus U(1)^2, the
 * abelian control case) and "sl2r" (indefinite pairing).
 *
 * All operations are pure; a model is immutable after construction and safe
 * to share across threads.
 */
class GroupModel {
public:
  static GroupModelPtr by_name(std::string_view name);
  static std::vector<std::string> known_names();

  GroupModel(std::string name, std::vector<Mat> basis,
             std::function<double(const Mat&)> group_residual,
             double pairing_scale = 1.0, double membership_tol = 1e-8,
             double log_radius = 1.0);

  const std::string& name() const { return name_; }
  int matrix_size() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Mat>& basis() const { return basis_; }
  double pairing_scale() const { return pairing_scale_; }
  double membership_tol() const { return membership_tol_; }
  double log_radius() const { return log_radius_; }

  GroupElement identity() const;
  AlgebraVector zero() const;
  AlgebraVector basis_vector(int k) const { return {basis_.at(k)}; }

  /// Coefficients of a in the algebra basis (least squares in the Frobenius
  /// metric; exact for matrices in the span).
  RVec coords(const Mat& a) const;
  AlgebraVector from_coords(const RVec& c) const;
  /// Distance from a to span(basis).
  double span_residual(const Mat& a) const;

  double group_residual(const Mat& g) const { return group_residual_(g); }
  bool is_group(const Mat& g) const { return group_residual_(g) <= membership_tol_; }
  bool is_algebra(const Mat& a) const { return span_residual(a) <= membership_tol_; }

  /// Matrix exponential. Validates group membership of the result.
  GroupElement exp(const AlgebraVector& x) const;
  /// Principal matrix logarithm, projected onto span(basis). Requires
  /// ||g - I||_op < log_radius; throws std::domain_error otherwise.
  AlgebraVector log(const GroupElement& g) const;

  double pair(const AlgebraVector& a, const AlgebraVector& b) const;

  /// Matrix of v -> dexp_x(v) in basis coordinates.
  RMat dexp_op(const AlgebraVector& x) const;
  /// Smallest singular value of dexp_op above threshold 1e-9.
  bool dexp_invertible(const AlgebraVector& x) const;
  /// Solves dexp_x(w) = v for w.
  AlgebraVector dexp_inv(const AlgebraVector& x, const AlgebraVector& v) const;

  /// Deterministic sampling: coefficients uniform in [-scale, scale].
  AlgebraVector sample_algebra(std::uint64_t seed, double scale) const;
  GroupElement sample_group(std::uint64_t seed, double scale) const;

private:
  std::string name_;
  int n_;
  std::vector<Mat> basis_;
  std::function<double(const Mat&)> group_residual_;
  double pairing_scale_;
  double membership_tol_;
  double log_radius_;
  Eigen::LDLT<RMat> frob_gram_;  // Gram of Re tr(b_i^H b_j), for coords()
};

/// Commutator [x, y] = xy - yx.
AlgebraVector ad(const AlgebraVector& x, const AlgebraVector& y);

/// Adjoint action g x g^-1.
AlgebraVector Ad(const GroupElement& g, const AlgebraVector& x);

/// Left-trivialized differential of exp:
///   dexp_x(v) = sum_{k>=0} (-ad_x)^k v / (k+1)!,
/// i.e. theta^L(d/ds|_0 exp(x + s v)).
AlgebraVector dexp(const AlgebraVector& x, const AlgebraVector& v);

/// sinh-type operator series S_t(x) v = sum_{m>=0} t^{2m} ad_x^{2m} v / (2m+1)!.
/// Evaluating difference quotients like (Ad_{e^{-tx}} - Ad_{e^{tx}})/(2t)
/// through this series avoids the cancellation a literal quotient hits at
/// small t; the t = 0 value is the leading term.
AlgebraVector sinhc_ad(const AlgebraVector& x, const AlgebraVector& v, double t);

/// Largest singular value.
double operator_norm(const Mat& m);

/// Deterministic stream splitting for seeded sampling (splitmix64 mixing).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform double in [-scale, scale] from a raw 64-bit draw.
double uniform_pm(std::uint64_t raw, double scale);

}  // namespace qhdef
