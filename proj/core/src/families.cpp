#include "qhdef/families.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qhdef {

StructuredSpace fiber(const DeformationFamily& fam, double t) {
  if (!fam.contains(t)) {
    std::ostringstream msg;
    msg << "fiber: t = " << t << " outside the family interval (" << fam.t_lo
        << ", " << fam.t_hi << ")";
    throw std::domain_error(msg.str());
  }

  StructuredSpace s;
  s.flavor = (t != 0.0) ? Flavor::quasi_hamiltonian : Flavor::hamiltonian;
  s.pairing_rescale = (t != 0.0) ? 1.0 / t : 1.0;
  s.factors = fam.factors;
  s.chart.dim = fam.chart_dim;
  s.chart.domain_radius = fam.domain_radius;
  s.chart.embed = [fam, t](const RVec& u) { return fam.embed(u, t); };
  s.omega = [fam, t](const RVec& u, int i, int j) { return fam.omega(t, u, i, j); };
  s.moment = [fam, t](const RVec& u) {
    std::vector<Mat> m;
    for (size_t f = 0; f < fam.factors.size(); ++f) {
      ChartPoint c = fam.mu_hat(static_cast<int>(f), u, t);
      m.push_back(phi(*fam.factors[f], c).payload);
    }
    return m;
  };
  s.moment_deriv = [fam, t](int f, const RVec& u, int k) {
    AlgebraVector d = fam.dmu_hat(f, u, t, k);
    if (t == 0.0) return d;
    // theta^L(d exp(t x_hat)) = t dexp_{t x_hat}(d x_hat)
    ChartPoint c = fam.mu_hat(f, u, t);
    return AlgebraVector{t * dexp({t * c.x.mat}, d).mat};
  };
  s.act = fam.act;
  s.inf_act = fam.inf_act;
  return s;
}

// ---------------------------------------------------------------------------
// Double family

DeformationFamily double_family(GroupModelPtr model, GroupElement alpha0) {
  const int d = model->dim();
  GroupChart A(model, std::move(alpha0));

  DeformationFamily fam;
  fam.factors = {model, model};
  fam.chart_dim = 2 * d;
  fam.domain_radius = A.radius();

  auto x_at = [model, d](const RVec& u) { return model->from_coords(u.tail(d)); };

  fam.embed = [A, x_at, model, d](const RVec& u, double t) -> Point {
    Mat alpha = A.at(u.head(d)).mat;
    if (t != 0.0) return {alpha, model->exp({t * x_at(u).mat}).mat};
    return {alpha, x_at(u).mat};
  };

  auto frame_pair = [A, d, model](const RVec& u, int i) {
    if (i < d)
      return std::make_pair(A.frame(u.head(d), i), model->zero());
    return std::make_pair(model->zero(), model->basis_vector(i - d));
  };

  fam.omega = [model, x_at, frame_pair](double t, const RVec& u, int i, int j) {
    auto [a1, b1] = frame_pair(u, i);
    auto [a2, b2] = frame_pair(u, j);
    AlgebraVector x = x_at(u);
    // A_t a = -[x, S_t a], B_t b = 2 S_t b with S_t = sinh(t ad_x)/(t ad_x)
    AlgebraVector at_a2{-ad(x, sinhc_ad(x, a2, t)).mat};
    AlgebraVector bt_b1{2.0 * sinhc_ad(x, b1, t).mat};
    AlgebraVector bt_b2{2.0 * sinhc_ad(x, b2, t).mat};
    return model->pair(a1, at_a2) +
           0.5 * (model->pair(a1, bt_b2) - model->pair(a2, bt_b1));
  };

  fam.mu_hat = [A, x_at, d](int f, const RVec& u, double t) -> ChartPoint {
    AlgebraVector x = x_at(u);
    if (f == 0) return {Ad(A.at(u.head(d)), x), t};
    return {{-x.mat}, t};
  };

  fam.dmu_hat = [A, x_at, d, frame_pair](int f, const RVec& u, double, int k) {
    auto [a, b] = frame_pair(u, k);
    if (f == 0) return Ad(A.at(u.head(d)), {ad(a, x_at(u)).mat + b.mat});
    return AlgebraVector{-b.mat};
  };

  fam.act = [A, x_at, model, d](int f, const GroupElement& g, const RVec& u) {
    RVec out = u;
    if (f == 0) {
      out.head(d) = A.coords_of({g.mat * A.at(u.head(d)).mat});
    } else {
      Mat ginv = g.mat.inverse();
      out.head(d) = A.coords_of({A.at(u.head(d)).mat * ginv});
      out.tail(d) = model->coords(g.mat * x_at(u).mat * ginv);
    }
    return out;
  };

  fam.inf_act = [A, x_at, model, d](int f, const AlgebraVector& v, const RVec& u) {
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

  return fam;
}

DeformationFamily double_family(GroupModelPtr model) {
  GroupElement e = model->identity();
  return double_family(std::move(model), e);
}

// ---------------------------------------------------------------------------
// Conjugacy-class family

namespace {

// An isolated singularity of dexp_{tx} passes between 1/64 grid points
// without the smallest singular value ever evaluating below an
// exact-singularity threshold, so the scan needs a margin wide enough for
// the grid to bracket the crossing. The reported interval is therefore
// conservative: the true invertibility interval may be larger.
constexpr double kDexpScanMargin = 1e-2;

double dexp_margin(const GroupModel& model, const AlgebraVector& x, double t) {
  Eigen::JacobiSVD<RMat> svd(model.dexp_op({t * x.mat}));
  return svd.singularValues().minCoeff();
}

bool dexp_ok(const GroupModel& model, const AlgebraVector& x, double t) {
  return dexp_margin(model, x, t) >= kDexpScanMargin;
}

/// Outward grid scan (step 1/64) with bisection refinement to 1e-6 for the
/// boundary where dexp_{tx} loses invertibility. Cap at |t| = 8.
std::pair<double, bool> scan_boundary(const GroupModel& model, const AlgebraVector& x,
                                      double direction) {
  const double step = 1.0 / 64.0;
  const double cap = 8.0;
  double good = 0.0;
  for (double t = step; t <= cap + 0.5 * step; t += step) {
    if (!dexp_ok(model, x, direction * t)) {
      double lo = good, hi = t;
      while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (dexp_ok(model, x, direction * mid) ? lo : hi) = mid;
      }
      return {direction * lo, false};
    }
    good = t;
  }
  return {direction * cap, true};
}

}  // namespace

DeformationFamily conj_family(GroupModelPtr model, const AlgebraVector& x) {
  for (int k = 0; k <= 64; ++k) {
    const double t = static_cast<double>(k) / 64.0;
    if (!dexp_ok(*model, x, t)) {
      std::ostringstream msg;
      msg << "conj_family: dexp_{tx} is singular near t = " << t << " (margin "
          << dexp_margin(*model, x, t) << " < " << kDexpScanMargin
          << "); [0,1] is not contained in the invertibility interval";
      throw std::domain_error(msg.str());
    }
  }
  auto [lo, lo_capped] = scan_boundary(*model, x, -1.0);
  auto [hi, hi_capped] = scan_boundary(*model, x, +1.0);

  OrbitChart O(model, x);
  const int d = O.dim();

  DeformationFamily fam;
  fam.t_lo = lo;
  fam.t_hi = hi;
  fam.t_capped = lo_capped || hi_capped;
  fam.factors = {model};
  fam.chart_dim = d;
  fam.domain_radius = O.radius();

  fam.embed = [O, model](const RVec& s, double t) -> Point {
    if (t != 0.0) return {model->exp({t * O.at(s).mat}).mat};
    return {O.at(s).mat};
  };

  fam.omega = [O, model](double t, const RVec& s, int i, int j) {
    AlgebraVector y = O.at(s);
    AlgebraVector di = O.frame_generator(s, i), dj = O.frame_generator(s, j);
    // C_t dj = [y, S_t dj]
    return model->pair(di, ad(y, sinhc_ad(y, dj, t)));
  };

  fam.mu_hat = [O](int, const RVec& s, double t) -> ChartPoint {
    return {{-O.at(s).mat}, t};
  };
  fam.dmu_hat = [O](int, const RVec& s, double, int k) {
    return AlgebraVector{-O.frame(s, k).mat};
  };

  fam.act = [O](int, const GroupElement& g, const RVec& s) {
    return O.coords_of(Ad(g, O.at(s)));
  };
  fam.inf_act = [O](int, const AlgebraVector& v, const RVec& s) {
    return O.tangent_coords(s, ad(v, O.at(s)));
  };

  return fam;
}

// ---------------------------------------------------------------------------
// Fusion of families

DeformationFamily product_family(const DeformationFamily& f1, const DeformationFamily& f2) {
  const int d1 = f1.chart_dim, d2 = f2.chart_dim;
  const int n1 = static_cast<int>(f1.factors.size());

  DeformationFamily fam;
  fam.t_lo = std::max(f1.t_lo, f2.t_lo);
  fam.t_hi = std::min(f1.t_hi, f2.t_hi);
  fam.t_capped = f1.t_capped || f2.t_capped;
  fam.factors = f1.factors;
  fam.factors.insert(fam.factors.end(), f2.factors.begin(), f2.factors.end());
  fam.chart_dim = d1 + d2;
  fam.domain_radius = std::min(f1.domain_radius, f2.domain_radius);

  fam.embed = [f1, f2, d1, d2](const RVec& u, double t) {
    Point p = f1.embed(u.head(d1), t);
    Point q = f2.embed(u.tail(d2), t);
    p.insert(p.end(), q.begin(), q.end());
    return p;
  };
  fam.omega = [f1, f2, d1, d2](double t, const RVec& u, int i, int j) {
    if (i < d1 && j < d1) return f1.omega(t, u.head(d1), i, j);
    if (i >= d1 && j >= d1) return f2.omega(t, u.tail(d2), i - d1, j - d1);
    return 0.0;
  };
  fam.mu_hat = [f1, f2, d1, d2, n1](int f, const RVec& u, double t) {
    if (f < n1) return f1.mu_hat(f, u.head(d1), t);
    return f2.mu_hat(f - n1, u.tail(d2), t);
  };
  fam.dmu_hat = [f1, f2, d1, d2, n1](int f, const RVec& u, double t, int k) {
    if (f < n1) {
      if (k < d1) return f1.dmu_hat(f, u.head(d1), t, k);
      return AlgebraVector{Mat::Zero(f1.factors[f]->matrix_size(), f1.factors[f]->matrix_size())};
    }
    if (k >= d1) return f2.dmu_hat(f - n1, u.tail(d2), t, k - d1);
    return AlgebraVector{Mat::Zero(f2.factors[f - n1]->matrix_size(), f2.factors[f - n1]->matrix_size())};
  };
  fam.act = [f1, f2, d1, d2, n1](int f, const GroupElement& g, const RVec& u) {
    RVec out = u;
    if (f < n1)
      out.head(d1) = f1.act(f, g, u.head(d1));
    else
      out.tail(d2) = f2.act(f - n1, g, u.tail(d2));
    return out;
  };
  fam.inf_act = [f1, f2, d1, d2, n1](int f, const AlgebraVector& v, const RVec& u) {
    RVec out = RVec::Zero(d1 + d2);
    if (f < n1)
      out.head(d1) = f1.inf_act(f, v, u.head(d1));
    else
      out.tail(d2) = f2.inf_act(f - n1, v, u.tail(d2));
    return out;
  };
  return fam;
}

DeformationFamily fuse_family(const DeformationFamily& fam, int i, int j) {
  const int n = static_cast<int>(fam.factors.size());
  if (i == j || i < 0 || j < 0 || i >= n || j >= n)
    throw std::invalid_argument("fuse_family: factor indices out of range");
  GroupModelPtr model = fam.factors[i];
  if (model->name() != fam.factors[j]->name())
    throw std::invalid_argument("fuse_family: factors act through different group models");

  DeformationFamily out = fam;
  out.factors.clear();
  std::vector<int> idx;
  for (int f = 0; f < n; ++f)
    if (f != j) {
      idx.push_back(f);
      out.factors.push_back(fam.factors[f]);
    }

  // The fiberwise pullback of the added term is exactly the internal-fusion
  // correction of the fiber under its (1/t)-rescaled pairing; the weight t
  // makes the t = 0 fiber a plain Hamiltonian fusion (sigma unchanged).
  out.omega = [fam, model, i, j](double t, const RVec& u, int a, int b) {
    ChartPoint ci = fam.mu_hat(i, u, t), cj = fam.mu_hat(j, u, t);
    AlgebraVector la = theta_hat(*model, Side::left, ci, fam.dmu_hat(i, u, t, a));
    AlgebraVector lb = theta_hat(*model, Side::left, ci, fam.dmu_hat(i, u, t, b));
    AlgebraVector ra = theta_hat(*model, Side::right, cj, fam.dmu_hat(j, u, t, a));
    AlgebraVector rb = theta_hat(*model, Side::right, cj, fam.dmu_hat(j, u, t, b));
    return fam.omega(t, u, a, b) + t * 0.5 * wedge_pair(*model, la, lb, ra, rb);
  };

  out.mu_hat = [fam, model, idx, i, j](int f, const RVec& u, double t) -> ChartPoint {
    const int old = idx[f];
    if (old != i) return fam.mu_hat(old, u, t);
    return mul_chart(*model, fam.mu_hat(i, u, t), fam.mu_hat(j, u, t));
  };

  out.dmu_hat = [fam, model, idx, i, j](int f, const RVec& u, double t, int k) {
    const int old = idx[f];
    if (old != i) return fam.dmu_hat(old, u, t, k);
    ChartPoint ci = fam.mu_hat(i, u, t), cj = fam.mu_hat(j, u, t);
    AlgebraVector di = fam.dmu_hat(i, u, t, k), dj = fam.dmu_hat(j, u, t, k);
    // theta^L-chain through m(a,b) = (1/t) log(e^{t x_i} e^{t x_j}):
    //   dz = dexp^{-1}_{t z}( Ad_{e^{-t x_j}} dexp_{t x_i}(d x_i) + dexp_{t x_j}(d x_j) )
    Mat ej = model->exp({t * cj.x.mat}).mat;
    AlgebraVector w{ej.inverse() * dexp({t * ci.x.mat}, di).mat * ej +
                    dexp({t * cj.x.mat}, dj).mat};
    ChartPoint z = mul_chart(*model, ci, cj);
    return model->dexp_inv({t * z.x.mat}, w);
  };

  out.act = [fam, idx, i, j](int f, const GroupElement& g, const RVec& u) {
    const int old = idx[f];
    if (old != i) return fam.act(old, g, u);
    return fam.act(i, g, fam.act(j, g, u));
  };
  out.inf_act = [fam, idx, i, j](int f, const AlgebraVector& v, const RVec& u) {
    const int old = idx[f];
    if (old != i) return fam.inf_act(old, v, u);
    return RVec(fam.inf_act(i, v, u) + fam.inf_act(j, v, u));
  };

  return out;
}

DeformationFamily external_fuse_family(const DeformationFamily& f1,
                                       const DeformationFamily& f2, int i, int j) {
  DeformationFamily prod = product_family(f1, f2);
  return fuse_family(prod, i, static_cast<int>(f1.factors.size()) + j);
}

namespace {

DeformationFamily point_family(GroupModelPtr model) {
  DeformationFamily fam;
  fam.factors = {model};
  fam.chart_dim = 0;
  fam.domain_radius = 1.0;
  const int n = model->matrix_size();
  fam.embed = [n](const RVec&, double t) -> Point {
    if (t != 0.0) return {Mat::Identity(n, n)};
    return {Mat::Zero(n, n)};
  };
  fam.omega = [](double, const RVec&, int, int) { return 0.0; };
  fam.mu_hat = [model](int, const RVec&, double t) -> ChartPoint {
    return {model->zero(), t};
  };
  fam.dmu_hat = [model](int, const RVec&, double, int) { return model->zero(); };
  fam.act = [](int, const GroupElement&, const RVec& u) { return u; };
  fam.inf_act = [](int, const AlgebraVector&, const RVec& u) { return RVec::Zero(u.size()); };
  return fam;
}

}  // namespace

DeformationFamily moduli_family(GroupModelPtr model, int genus, int boundaries,
                                std::uint64_t base_seed) {
  if (genus < 0 || boundaries < 0)
    throw std::invalid_argument("moduli_family: genus and boundary count must be nonnegative");
  if (genus == 0 && boundaries == 0) return point_family(model);

  auto block = [&](int index, bool handle) {
    GroupElement alpha0 = base_seed ? model->sample_group(mix_seed(base_seed, index), 0.3)
                                    : model->identity();
    DeformationFamily d = double_family(model, alpha0);
    return handle ? fuse_family(d, 0, 1) : d;
  };

  DeformationFamily acc = block(0, boundaries == 0);
  for (int b = 1; b < boundaries; ++b) acc = external_fuse_family(acc, block(b, false), 0, 0);
  for (int h = boundaries == 0 ? 1 : 0; h < genus; ++h)
    acc = external_fuse_family(acc, block(boundaries + h, true), 0, 0);
  return acc;
}

}  // namespace qhdef
