#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qhdef/defspace.hpp"

using namespace qhdef;

TEST_CASE("phi: zero fiber, t = 1, zero element") {
  auto su2 = GroupModel::by_name("su2");
  auto x = su2->sample_algebra(3, 0.8);

  DefPoint p0 = phi(*su2, {x, 0.0});
  CHECK(p0.t == 0.0);
  CHECK_FALSE(p0.is_group());
  CHECK((p0.payload - x.mat).norm() == 0.0);

  DefPoint p1 = phi(*su2, {x, 1.0});
  CHECK((p1.payload - su2->exp(x).mat).norm() < 1e-15);

  DefPoint pid = phi(*su2, {su2->zero(), 0.7});
  CHECK((pid.payload - Mat::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("phi_inv: identity, roundtrips, abelian exactness") {
  auto su2 = GroupModel::by_name("su2");
  for (double t : {1.0, 0.25, -0.5}) {
    ChartPoint c = phi_inv(*su2, {t, Mat::Identity(2, 2)});
    CHECK(c.x.mat.norm() < 1e-14);
    CHECK(c.t == t);
  }

  for (const auto& name : {"su2", "so3", "t2", "sl2r"}) {
    auto m = GroupModel::by_name(name);
    for (int k = 0; k < 12; ++k) {
      auto x = m->sample_algebra(mix_seed(17, k), 0.4);
      const double t = 0.05 + 0.9 * (k / 12.0);
      ChartPoint back = phi_inv(*m, phi(*m, {x, t}));
      CHECK((back.x.mat - x.mat).norm() < 1e-9);
      DefPoint fwd = phi(*m, phi_inv(*m, phi(*m, {x, t})));
      CHECK(defpoint_equal(fwd, phi(*m, {x, t}), 1e-9));
    }
  }

  // abelian: log is linear, inversion is exact
  auto t2 = GroupModel::by_name("t2");
  auto x = t2->sample_algebra(5, 0.3);
  ChartPoint c = phi_inv(*t2, phi(*t2, {x, 0.125}));
  CHECK((c.x.mat - x.mat).norm() < 1e-14);
}

TEST_CASE("conj_act: identity, zero fiber is Ad, chart equivariance") {
  auto su2 = GroupModel::by_name("su2");
  auto x = su2->sample_algebra(21, 0.5);
  auto g = su2->sample_group(22, 0.8);

  DefPoint p = phi(*su2, {x, 0.5});
  CHECK(defpoint_equal(conj_act(*su2, su2->identity(), p), p, 1e-15));

  DefPoint z0 = conj_act(*su2, g, {0.0, x.mat});
  CHECK((z0.payload - Ad(g, x).mat).norm() < 1e-14);

  for (double t : {0.0, 0.25, 1.0}) {
    ChartPoint c = phi_inv(*su2, conj_act(*su2, g, phi(*su2, {x, t})));
    CHECK((c.x.mat - Ad(g, x).mat).norm() < 1e-9);
  }
}

TEST_CASE("conj_act distributes over mul on both fiber kinds") {
  auto so3 = GroupModel::by_name("so3");
  auto g = so3->sample_group(31, 0.7);
  for (double t : {0.0, 0.5}) {
    DefPoint p = phi(*so3, {so3->sample_algebra(32, 0.4), t});
    DefPoint q = phi(*so3, {so3->sample_algebra(33, 0.4), t});
    DefPoint lhs = conj_act(*so3, g, mul(*so3, p, q));
    DefPoint rhs = mul(*so3, conj_act(*so3, g, p), conj_act(*so3, g, q));
    CHECK(defpoint_equal(lhs, rhs, 1e-9));
  }
}

TEST_CASE("mul: zero fiber adds, nonzero multiplies, t mismatch throws") {
  auto su2 = GroupModel::by_name("su2");
  auto x = su2->sample_algebra(41, 0.6);
  auto y = su2->sample_algebra(42, 0.6);

  DefPoint sum = mul(*su2, {0.0, x.mat}, {0.0, y.mat});
  CHECK((sum.payload - (x.mat + y.mat)).norm() == 0.0);

  DefPoint prod = mul(*su2, phi(*su2, {x, 1.0}), phi(*su2, {y, 1.0}));
  CHECK((prod.payload - su2->exp(x).mat * su2->exp(y).mat).norm() < 1e-15);

  CHECK_THROWS_AS((void)mul(*su2, {0.5, su2->exp(x).mat}, {0.25, su2->exp(y).mat}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)mul_chart(*su2, {x, 0.5}, {y, 0.25}), std::invalid_argument);
}

TEST_CASE("mul is associative fiberwise") {
  auto su2 = GroupModel::by_name("su2");
  for (double t : {0.0, 0.125, 1.0}) {
    DefPoint a = phi(*su2, {su2->sample_algebra(51, 0.4), t});
    DefPoint b = phi(*su2, {su2->sample_algebra(52, 0.4), t});
    DefPoint c = phi(*su2, {su2->sample_algebra(53, 0.4), t});
    DefPoint lhs = mul(*su2, mul(*su2, a, b), c);
    DefPoint rhs = mul(*su2, a, mul(*su2, b, c));
    CHECK(defpoint_equal(lhs, rhs, 1e-9));
  }
}

TEST_CASE("mul_chart: t = 0 adds, commuting elements add for all t") {
  auto su2 = GroupModel::by_name("su2");
  auto x = su2->sample_algebra(61, 0.5);
  auto y = su2->sample_algebra(62, 0.5);

  ChartPoint zero = mul_chart(*su2, {x, 0.0}, {y, 0.0});
  CHECK((zero.x.mat - (x.mat + y.mat)).norm() == 0.0);

  for (double t : {0.1, 0.5, 1.0}) {
    ChartPoint c = mul_chart(*su2, {x, t}, {{1.5 * x.mat}, t});
    CHECK((c.x.mat - 2.5 * x.mat).norm() < 1e-12);
  }

  // abelian: chart coordinate of the product is x + y for every t
  auto t2 = GroupModel::by_name("t2");
  auto a = t2->sample_algebra(63, 0.5);
  auto b = t2->sample_algebra(64, 0.5);
  for (double t : {0.0, 0.2, 1.0}) {
    ChartPoint c = mul_chart(*t2, {a, t}, {b, t});
    CHECK((c.x.mat - (a.mat + b.mat)).norm() < 1e-13);
  }
}

TEST_CASE("mul_chart converges to x + y with O(t) error") {
  auto su2 = GroupModel::by_name("su2");
  auto x = su2->sample_algebra(71, 0.6);
  auto y = su2->sample_algebra(72, 0.6);
  Mat limit = x.mat + y.mat;
  double prev = -1.0;
  for (int k = 1; k <= 6; ++k) {
    const double t = std::pow(0.5, k);
    const double dev = (mul_chart(*su2, {x, t}, {y, t}).x.mat - limit).norm();
    if (prev > 0) CHECK(dev < 0.75 * prev);  // at least linear decay
    prev = dev;
  }
}

TEST_CASE("mul_chart against the degree-4 BCH truncation, O(t^4) error") {
  auto su2 = GroupModel::by_name("su2");
  auto so3 = GroupModel::by_name("so3");
  for (const auto& m : {su2, so3}) {
    Mat x = m->sample_algebra(81, 0.7).mat;
    Mat y = m->sample_algebra(82, 0.7).mat;
    std::vector<double> ts = {0.2, 0.1, 0.05, 0.025}, errs;
    for (double t : ts)
      errs.push_back((mul_chart(*m, {{x}, t}, {{y}, t}).x.mat - oracles::bch4(x, y, t)).norm());
    // log-log slope across the grid
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < ts.size(); ++i) {
      const double lx = std::log(ts[i]), ly = std::log(errs[i]);
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    const double n = static_cast<double>(ts.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope >= 3.5);
  }
}

TEST_CASE("theta_hat: identity at t = 0, abelian, FD oracle") {
  auto su2 = GroupModel::by_name("su2");
  auto x = su2->sample_algebra(91, 0.6);
  auto v = su2->sample_algebra(92, 1.0);

  CHECK((theta_hat(*su2, Side::left, {x, 0.0}, v).mat - v.mat).norm() == 0.0);
  CHECK((theta_hat(*su2, Side::right, {x, 0.0}, v).mat - v.mat).norm() == 0.0);

  auto t2 = GroupModel::by_name("t2");
  auto xa = t2->sample_algebra(93, 0.6);
  auto va = t2->sample_algebra(94, 1.0);
  for (double t : {0.0, 0.3, 1.0}) {
    CHECK((theta_hat(*t2, Side::left, {xa, t}, va).mat - va.mat).norm() < 1e-14);
    CHECK((theta_hat(*t2, Side::right, {xa, t}, va).mat - va.mat).norm() < 1e-14);
  }

  // (1/t) theta^{L|R} pulled through the phi chart by finite differences
  const double eps = 1e-6;
  for (double t : {1.0, 0.25}) {
    auto pulled = [&](double side_sign) {
      Mat gp = su2->exp({t * (x.mat + eps * v.mat)}).mat;
      Mat gm = su2->exp({t * (x.mat - eps * v.mat)}).mat;
      Mat g0 = su2->exp({t * x.mat}).mat;
      if (side_sign > 0) {  // theta^L: g0^-1 dg
        return Mat((su2->log({g0.inverse() * gp}).mat - su2->log({g0.inverse() * gm}).mat) /
                   (2 * eps * t));
      }
      return Mat((su2->log({gp * g0.inverse()}).mat - su2->log({gm * g0.inverse()}).mat) /
                 (2 * eps * t));
    };
    CHECK((theta_hat(*su2, Side::left, {x, t}, v).mat - pulled(+1)).norm() < 1e-7);
    CHECK((theta_hat(*su2, Side::right, {x, t}, v).mat - pulled(-1)).norm() < 1e-7);
  }
}

TEST_CASE("deformation-space smoke tests: pi, kappa, f-tilde through phi") {
  auto su2 = GroupModel::by_name("su2");
  auto x = su2->sample_algebra(101, 0.7);

  // pi(phi(x,t)) = t exactly, kappa(phi(x,t)) = exp(tx)
  for (double t : {-0.5, 0.0, 0.3, 1.0}) {
    DefPoint p = phi(*su2, {x, t});
    CHECK(p.t == t);
    Mat kappa = p.is_group() ? p.payload : Mat::Identity(2, 2);
    CHECK((kappa - su2->exp({t * x.mat}).mat).norm() < 1e-13);
  }

  // f = Re(g_01) vanishes at the identity; (1/t) f(exp(tx)) converges to
  // df(x) = Re(x_01) with O(t) difference-quotient error
  auto f_tilde = [&](double t) {
    if (t == 0.0) return x.mat(0, 1).real();
    return su2->exp({t * x.mat}).mat(0, 1).real() / t;
  };
  double prev = -1.0;
  for (int k = 1; k <= 6; ++k) {
    const double t = std::pow(0.5, k);
    const double dev = std::abs(f_tilde(t) - f_tilde(0.0));
    if (prev > 0) CHECK(dev < 0.75 * prev);
    prev = dev;
  }
}
