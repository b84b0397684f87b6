#include "qhdef/spaces.hpp"

#include <cmath>
#include <stdexcept>

namespace qhdef {

namespace {

RVec real_stack(const Mat& m) {
  const auto n = m.size();
  RVec v(2 * n);
  Eigen::Map<const Eigen::VectorXcd> flat(m.data(), n);
  v.head(n) = flat.real();
  v.tail(n) = flat.imag();
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// GroupChart

GroupChart::GroupChart(GroupModelPtr model, GroupElement base, double radius)
    : model_(std::move(model)),
      base_(std::move(base)),
      base_inv_(base_.mat.inverse()),
      radius_(radius) {}

GroupElement GroupChart::at(const RVec& u) const {
  return {base_.mat * model_->exp(model_->from_coords(u)).mat};
}

AlgebraVector GroupChart::frame(const RVec& u, int k) const {
  return dexp(model_->from_coords(u), model_->basis_vector(k));
}

RVec GroupChart::coords_of(const GroupElement& g) const {
  return model_->coords(model_->log({base_inv_ * g.mat}).mat);
}

RVec GroupChart::tangent_coords(const RVec& u, const AlgebraVector& xi) const {
  RMat op = model_->dexp_op(model_->from_coords(u));
  return op.partialPivLu().solve(model_->coords(xi.mat));
}

// ---------------------------------------------------------------------------
// OrbitChart

OrbitChart::OrbitChart(GroupModelPtr model, AlgebraVector x, double radius)
    : model_(std::move(model)), x_(std::move(x)), radius_(radius) {
  // Gram-Schmidt on the infinitesimal-action images [b_k, x]; combinations
  // are carried back to the generators so the frame is orthonormal at s = 0.
  const int d = model_->dim();
  std::vector<RVec> kept_images;
  std::vector<RVec> kept_gens;
  for (int k = 0; k < d; ++k) {
    RVec gen = RVec::Zero(d);
    gen(k) = 1.0;
    RVec img = model_->coords(ad(model_->basis_vector(k), x_).mat);
    for (size_t j = 0; j < kept_images.size(); ++j) {
      const double c = kept_images[j].dot(img);
      img -= c * kept_images[j];
      gen -= c * kept_gens[j];
    }
    const double nrm = img.norm();
    if (nrm > 1e-8) {
      kept_images.push_back(img / nrm);
      kept_gens.push_back(gen / nrm);
      transversal_.push_back(model_->from_coords(kept_gens.back()).mat);
    }
  }
}

AlgebraVector OrbitChart::at(const RVec& s) const {
  Mat m = Mat::Zero(model_->matrix_size(), model_->matrix_size());
  for (int k = 0; k < dim(); ++k) m += s(k) * transversal_[k];
  return Ad(model_->exp({m}), x_);
}

AlgebraVector OrbitChart::frame_generator(const RVec& s, int k) const {
  Mat m = Mat::Zero(model_->matrix_size(), model_->matrix_size());
  for (int j = 0; j < dim(); ++j) m += s(j) * transversal_[j];
  AlgebraVector d = dexp({m}, {transversal_[k]});
  return Ad(model_->exp({m}), d);
}

AlgebraVector OrbitChart::frame(const RVec& s, int k) const {
  return ad(frame_generator(s, k), at(s));
}

RVec OrbitChart::coords_of(const AlgebraVector& target) const {
  const int d = dim();
  RVec s = RVec::Zero(d);
  if (d == 0) {
    if ((at(s).mat - target.mat).norm() > 1e-9)
      throw std::domain_error("OrbitChart: target not on the (pointlike) orbit");
    return s;
  }
  const double scale = std::max(1.0, target.mat.norm());
  for (int iter = 0; iter < 60; ++iter) {
    RVec r = real_stack(at(s).mat - target.mat);
    if (r.norm() < 1e-13 * scale) {
      if (s.norm() >= radius_)
        throw std::domain_error("OrbitChart: inverted point left the chart domain");
      return s;
    }
    RMat jac(r.size(), d);
    for (int k = 0; k < d; ++k) jac.col(k) = real_stack(frame(s, k).mat);
    RVec step = jac.colPivHouseholderQr().solve(r);
    s -= step;
    if (s.norm() > 2.0 * radius_)
      throw std::domain_error("OrbitChart: inversion diverged outside the chart");
  }
  throw std::domain_error("OrbitChart: inversion did not converge");
}

RVec OrbitChart::tangent_coords(const RVec& s, const AlgebraVector& xi) const {
  const int d = dim();
  if (d == 0) return RVec(0);
  RMat jac(2 * model_->matrix_size() * model_->matrix_size(), d);
  for (int k = 0; k < d; ++k) jac.col(k) = real_stack(frame(s, k).mat);
  return jac.colPivHouseholderQr().solve(real_stack(xi.mat));
}

// ---------------------------------------------------------------------------
// The double D(G)

StructuredSpace double_space(GroupModelPtr model, GroupElement alpha0, GroupElement beta0) {
  const int d = model->dim();
  GroupChart A(model, std::move(alpha0));
  GroupChart B(model, std::move(beta0));

  StructuredSpace s;
  s.flavor = Flavor::quasi_hamiltonian;
  s.factors = {model, model};
  s.chart.dim = 2 * d;
  s.chart.domain_radius = std::min(A.radius(), B.radius());
  s.chart.embed = [A, B, d](const RVec& u) -> Point {
    return {A.at(u.head(d)).mat, B.at(u.tail(d)).mat};
  };

  // theta^L components (u_i, v_i) of the i-th coordinate field
  auto frame_pair = [A, B, d, model](const RVec& u, int i) {
    if (i < d)
      return std::make_pair(A.frame(u.head(d), i), model->zero());
    return std::make_pair(model->zero(), B.frame(u.tail(d), i - d));
  };

  s.omega = [A, B, d, model, frame_pair](const RVec& u, int i, int j) {
    auto [u1, v1] = frame_pair(u, i);
    auto [u2, v2] = frame_pair(u, j);
    GroupElement beta = B.at(u.tail(d));
    AlgebraVector ad_u1 = Ad(beta, u1), ad_u2 = Ad(beta, u2);
    double w = 0.5 * (model->pair(ad_u1, u2) - model->pair(ad_u2, u1));
    w += 0.5 * (model->pair(u1, {v2.mat + Ad(beta, v2).mat}) -
                model->pair(u2, {v1.mat + Ad(beta, v1).mat}));
    return w;
  };

  s.moment = [A, B, d](const RVec& u) -> std::vector<Mat> {
    Mat a = A.at(u.head(d)).mat, b = B.at(u.tail(d)).mat;
    return {a * b * a.inverse(), b.inverse()};
  };

  s.moment_deriv = [A, B, d, model, frame_pair](int f, const RVec& u, int k) {
    auto [a, b] = frame_pair(u, k);
    GroupElement alpha = A.at(u.head(d)), beta = B.at(u.tail(d));
    if (f == 0) {
      Mat binv = beta.mat.inverse();
      return Ad(alpha, {binv * a.mat * beta.mat - a.mat + b.mat});
    }
    return AlgebraVector{-Ad(beta, b).mat};
  };

  s.act = [A, B, d](int f, const GroupElement& g, const RVec& u) {
    RVec out = u;
    Mat ginv = g.mat.inverse();
    if (f == 0) {
      out.head(d) = A.coords_of({g.mat * A.at(u.head(d)).mat});
    } else {
      out.head(d) = A.coords_of({A.at(u.head(d)).mat * ginv});
      out.tail(d) = B.coords_of({g.mat * B.at(u.tail(d)).mat * ginv});
    }
    return out;
  };

  s.inf_act = [A, B, d](int f, const AlgebraVector& v, const RVec& u) {
    RVec out = RVec::Zero(2 * d);
    GroupElement alpha = A.at(u.head(d));
    Mat ainv = alpha.mat.inverse();
    if (f == 0) {
      out.head(d) = A.tangent_coords(u.head(d), {ainv * v.mat * alpha.mat});
    } else {
      out.head(d) = A.tangent_coords(u.head(d), {-v.mat});
      GroupElement beta = B.at(u.tail(d));
      Mat binv = beta.mat.inverse();
      out.tail(d) = B.tangent_coords(u.tail(d), {binv * v.mat * beta.mat - v.mat});
    }
    return out;
  };

  return s;
}

StructuredSpace double_space(GroupModelPtr model) {
  GroupElement e = model->identity();
  return double_space(std::move(model), e, e);
}

// ---------------------------------------------------------------------------
// T*G in the left trivialization

StructuredSpace tstar_space(GroupModelPtr model, GroupElement alpha0, AlgebraVector x0) {
  const int d = model->dim();
  GroupChart A(model, std::move(alpha0));
  Mat xbase = x0.mat;

  StructuredSpace s;
  s.flavor = Flavor::hamiltonian;
  s.factors = {model, model};
  s.chart.dim = 2 * d;
  s.chart.domain_radius = A.radius();

  auto x_at = [model, xbase, d](const RVec& u) {
    return AlgebraVector{xbase + model->from_coords(u.tail(d)).mat};
  };

  s.chart.embed = [A, x_at, d](const RVec& u) -> Point {
    return {A.at(u.head(d)).mat, x_at(u).mat};
  };

  auto frame_pair = [A, d, model](const RVec& u, int i) {
    if (i < d)
      return std::make_pair(A.frame(u.head(d), i), model->zero());
    return std::make_pair(model->zero(), model->basis_vector(i - d));
  };

  s.omega = [model, frame_pair, x_at](const RVec& u, int i, int j) {
    auto [y1, z1] = frame_pair(u, i);
    auto [y2, z2] = frame_pair(u, j);
    return model->pair(y1, z2) - model->pair(y2, z1) +
           model->pair(x_at(u), ad(y1, y2));
  };

  s.moment = [A, x_at, d](const RVec& u) -> std::vector<Mat> {
    Mat a = A.at(u.head(d)).mat, x = x_at(u).mat;
    return {a * x * a.inverse(), -x};
  };

  s.moment_deriv = [A, x_at, d, frame_pair](int f, const RVec& u, int k) {
    auto [y, z] = frame_pair(u, k);
    if (f == 0) {
      GroupElement alpha = A.at(u.head(d));
      return Ad(alpha, {ad(y, x_at(u)).mat + z.mat});
    }
    return AlgebraVector{-z.mat};
  };

  s.act = [A, x_at, model, xbase, d](int f, const GroupElement& g, const RVec& u) {
    RVec out = u;
    if (f == 0) {
      out.head(d) = A.coords_of({g.mat * A.at(u.head(d)).mat});
    } else {
      Mat ginv = g.mat.inverse();
      out.head(d) = A.coords_of({A.at(u.head(d)).mat * ginv});
      out.tail(d) = model->coords(g.mat * x_at(u).mat * ginv - xbase);
    }
    return out;
  };

  s.inf_act = [A, x_at, model, d](int f, const AlgebraVector& v, const RVec& u) {
    RVec out = RVec::Zero(2 * d);
    GroupElement alpha = A.at(u.head(d));
    if (f == 0) {
      out.head(d) = A.tangent_coords(u.head(d), {alpha.mat.inverse() * v.mat * alpha.mat});
    } else {
      out.head(d) = A.tangent_coords(u.head(d), {-v.mat});
      out.tail(d) = model->coords(ad(v, x_at(u)).mat);
    }
    return out;
  };

  return s;
}

StructuredSpace tstar_space(GroupModelPtr model) {
  GroupElement e = model->identity();
  AlgebraVector z = model->zero();
  return tstar_space(std::move(model), e, z);
}

// ---------------------------------------------------------------------------
// Conjugacy classes and adjoint orbits

namespace {

StructuredSpace orbit_like_space(GroupModelPtr model, const AlgebraVector& x, bool conjugacy) {
  OrbitChart O(model, x);
  const int d = O.dim();

  StructuredSpace s;
  s.flavor = conjugacy ? Flavor::quasi_hamiltonian : Flavor::hamiltonian;
  s.factors = {model};
  s.chart.dim = d;
  s.chart.domain_radius = O.radius();

  if (conjugacy) {
    s.chart.embed = [O, model](const RVec& u) -> Point {
      return {model->exp(O.at(u)).mat};
    };
    s.omega = [O, model](const RVec& u, int i, int j) {
      AlgebraVector di = O.frame_generator(u, i), dj = O.frame_generator(u, j);
      GroupElement f = model->exp(O.at(u));
      return 0.5 * (model->pair(di, Ad(f, dj)) - model->pair(dj, Ad(f, di)));
    };
    // Moment f -> f^-1, conjugation equivariant; the plain inclusion meets
    // the moment condition with the sign opposite to the double's.
    s.moment = [O, model](const RVec& u) -> std::vector<Mat> {
      return {model->exp(O.at(u)).mat.inverse()};
    };
    s.moment_deriv = [O, model](int, const RVec& u, int k) {
      AlgebraVector dk = O.frame_generator(u, k);
      GroupElement f = model->exp(O.at(u));
      return AlgebraVector{Ad(f, dk).mat - dk.mat};
    };
  } else {
    s.chart.embed = [O](const RVec& u) -> Point { return {O.at(u).mat}; };
    s.omega = [O, model](const RVec& u, int i, int j) {
      AlgebraVector di = O.frame_generator(u, i), dj = O.frame_generator(u, j);
      return -model->pair(O.at(u), ad(di, dj));
    };
    s.moment = [O](const RVec& u) -> std::vector<Mat> { return {-O.at(u).mat}; };
    s.moment_deriv = [O](int, const RVec& u, int k) {
      return AlgebraVector{-O.frame(u, k).mat};
    };
  }

  s.act = [O](int, const GroupElement& g, const RVec& u) {
    return O.coords_of(Ad(g, O.at(u)));
  };
  s.inf_act = [O](int, const AlgebraVector& v, const RVec& u) {
    return O.tangent_coords(u, ad(v, O.at(u)));
  };

  return s;
}

}  // namespace

StructuredSpace conj_class_space(GroupModelPtr model, const GroupElement& a) {
  AlgebraVector x = model->log(a);
  return orbit_like_space(std::move(model), x, /*conjugacy=*/true);
}

StructuredSpace orbit_space(GroupModelPtr model, const AlgebraVector& x) {
  return orbit_like_space(std::move(model), x, /*conjugacy=*/false);
}

}  // namespace qhdef
