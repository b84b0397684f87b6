#include "qhdef/liegroup.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace qhdef {

namespace {

using Cplx = std::complex<double>;
const Cplx I1(0.0, 1.0);

double frob_re_inner(const Mat& a, const Mat& b) {
  return (a.adjoint() * b).trace().real();
}

Mat su2_basis_element(int k) {
  Mat m(2, 2);
  switch (k) {
    case 0: m << 0, 1, 1, 0; break;                 // sigma_1
    case 1: m << 0, -I1, I1, 0; break;              // sigma_2
    default: m << 1, 0, 0, -1; break;               // sigma_3
  }
  return Cplx(0.0, -0.5) * m;  // b_k = -(i/2) sigma_k, [b_a,b_b] = eps_abc b_c
}

Mat so3_basis_element(int k) {
  Mat m = Mat::Zero(3, 3);
  int a = (k + 1) % 3, b = (k + 2) % 3;
  m(b, a) = 1.0;
  m(a, b) = -1.0;
  return m;  // L_k with [L_a,L_b] = eps_abc L_c
}

double unitary_det1_residual(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  double r = (g.adjoint() * g - Mat::Identity(n, n)).norm();
  r = std::max(r, std::abs(g.determinant() - Cplx(1.0)));
  return r;
}

double real_det1_residual(const Mat& g) {
  double r = g.imag().norm();
  r = std::max(r, std::abs(g.determinant() - Cplx(1.0)));
  return r;
}

double so3_residual(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  double r = g.imag().norm();
  r = std::max(r, (g.transpose() * g - Mat::Identity(n, n)).norm());
  r = std::max(r, std::abs(g.determinant() - Cplx(1.0)));
  return r;
}

double diag_unitary_residual(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) r = std::max(r, std::abs(g(i, j)));
  r = std::max(r, (g.adjoint() * g - Mat::Identity(n, n)).norm());
  return r;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform_pm(std::uint64_t raw, double scale) {
  // 53-bit mantissa draw in [0,1), mapped to [-scale, scale]
  const double u = static_cast<double>(raw >> 11) * 0x1.0p-53;
  return (2.0 * u - 1.0) * scale;
}

GroupModel::GroupModel(std::string name, std::vector<Mat> basis,
                       std::function<double(const Mat&)> group_residual,
                       double pairing_scale, double membership_tol,
                       double log_radius)
    : name_(std::move(name)),
      n_(static_cast<int>(basis.at(0).rows())),
      basis_(std::move(basis)),
      group_residual_(std::move(group_residual)),
      pairing_scale_(pairing_scale),
      membership_tol_(membership_tol),
      log_radius_(log_radius) {
  const int d = dim();
  RMat gram(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) gram(i, j) = frob_re_inner(basis_[i], basis_[j]);
  frob_gram_ = gram.ldlt();
  if (frob_gram_.info() != Eigen::Success ||
      std::abs(gram.determinant()) < 1e-12)
    throw std::invalid_argument("GroupModel: algebra basis is not linearly independent");
}

GroupElement GroupModel::identity() const { return {Mat::Identity(n_, n_)}; }

AlgebraVector GroupModel::zero() const { return {Mat::Zero(n_, n_)}; }

RVec GroupModel::coords(const Mat& a) const {
  const int d = dim();
  RVec rhs(d);
  for (int i = 0; i < d; ++i) rhs(i) = frob_re_inner(basis_[i], a);
  return frob_gram_.solve(rhs);
}

AlgebraVector GroupModel::from_coords(const RVec& c) const {
  Mat m = Mat::Zero(n_, n_);
  for (int i = 0; i < dim(); ++i) m += c(i) * basis_[i];
  return {m};
}

double GroupModel::span_residual(const Mat& a) const {
  return (from_coords(coords(a)).mat - a).norm();
}

GroupElement GroupModel::exp(const AlgebraVector& x) const {
  Mat g = x.mat.exp();
  const double r = group_residual_(g);
  if (r > membership_tol_)
    throw std::runtime_error("GroupModel '" + name_ +
                             "': exp left the group (residual " +
                             std::to_string(r) + "), model is inconsistent");
  return {g};
}

AlgebraVector GroupModel::log(const GroupElement& g) const {
  const double dist = operator_norm(g.mat - Mat::Identity(n_, n_));
  if (!(dist < log_radius_))
    throw std::domain_error("GroupModel '" + name_ + "': log outside radius (||g - I|| = " +
                            std::to_string(dist) + " >= " + std::to_string(log_radius_) + ")");
  Mat l = g.mat.log();
  AlgebraVector x = from_coords(coords(l));
  if ((x.mat - l).norm() > membership_tol_)
    throw std::domain_error("GroupModel '" + name_ + "': log landed off the algebra");
  return x;
}

double GroupModel::pair(const AlgebraVector& a, const AlgebraVector& b) const {
  return pairing_scale_ * (a.mat * b.mat).trace().real();
}

RMat GroupModel::dexp_op(const AlgebraVector& x) const {
  const int d = dim();
  RMat op(d, d);
  for (int k = 0; k < d; ++k)
    op.col(k) = coords(dexp(x, basis_vector(k)).mat);
  return op;
}

bool GroupModel::dexp_invertible(const AlgebraVector& x) const {
  Eigen::JacobiSVD<RMat> svd(dexp_op(x));
  return svd.singularValues().minCoeff() > 1e-9;
}

AlgebraVector GroupModel::dexp_inv(const AlgebraVector& x, const AlgebraVector& v) const {
  RVec c = dexp_op(x).partialPivLu().solve(coords(v.mat));
  return from_coords(c);
}

AlgebraVector GroupModel::sample_algebra(std::uint64_t seed, double scale) const {
  RVec c(dim());
  for (int i = 0; i < dim(); ++i)
    c(i) = uniform_pm(mix_seed(seed, static_cast<std::uint64_t>(i)), scale);
  return from_coords(c);
}

GroupElement GroupModel::sample_group(std::uint64_t seed, double scale) const {
  return exp(sample_algebra(seed, scale));
}

GroupModelPtr GroupModel::by_name(std::string_view name) {
  if (name == "su2") {
    std::vector<Mat> basis = {su2_basis_element(0), su2_basis_element(1), su2_basis_element(2)};
    return std::make_shared<GroupModel>("su2", std::move(basis), &unitary_det1_residual);
  }
  if (name == "so3") {
    std::vector<Mat> basis = {so3_basis_element(0), so3_basis_element(1), so3_basis_element(2)};
    return std::make_shared<GroupModel>("so3", std::move(basis), &so3_residual);
  }
  if (name == "t2") {
    Mat b1 = Mat::Zero(2, 2), b2 = Mat::Zero(2, 2);
    b1(0, 0) = I1;
    b2(1, 1) = I1;
    return std::make_shared<GroupModel>("t2", std::vector<Mat>{b1, b2}, &diag_unitary_residual);
  }
  if (name == "sl2r") {
    Mat h(2, 2), s(2, 2), r(2, 2);
    h << 1, 0, 0, -1;    // H
    s << 0, 1, 1, 0;     // E + F
    r << 0, 1, -1, 0;    // E - F
    return std::make_shared<GroupModel>("sl2r", std::vector<Mat>{h, s, r}, &real_det1_residual);
  }
  throw std::invalid_argument("unknown group model '" + std::string(name) +
                              "' (known: su2, so3, t2, sl2r)");
}

std::vector<std::string> GroupModel::known_names() {
  return {"su2", "so3", "t2", "sl2r"};
}

AlgebraVector ad(const AlgebraVector& x, const AlgebraVector& y) {
  return {x.mat * y.mat - y.mat * x.mat};
}

AlgebraVector Ad(const GroupElement& g, const AlgebraVector& x) {
  return {g.mat * x.mat * g.mat.inverse()};
}

AlgebraVector dexp(const AlgebraVector& x, const AlgebraVector& v) {
  Mat acc = v.mat;
  Mat term = v.mat;
  const double floor = 1e-15 * std::max(1.0, v.mat.norm());
  for (int k = 1; k <= 60; ++k) {
    term = -(x.mat * term - term * x.mat) / (k + 1.0);
    acc += term;
    if (term.norm() < floor) break;
  }
  return {acc};
}

AlgebraVector sinhc_ad(const AlgebraVector& x, const AlgebraVector& v, double t) {
  Mat acc = v.mat;
  Mat term = v.mat;
  const double floor = 1e-16 * std::max(1.0, v.mat.norm());
  for (int m = 1; m <= 60; ++m) {
    Mat bracket = x.mat * term - term * x.mat;
    bracket = x.mat * bracket - bracket * x.mat;  // ad_x^2
    const double k = 2.0 * m;
    term = (t * t) * bracket / (k * (k + 1.0));
    acc += term;
    if (term.norm() < floor) break;
  }
  return {acc};
}

double operator_norm(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().maxCoeff();
}

}  // namespace qhdef
