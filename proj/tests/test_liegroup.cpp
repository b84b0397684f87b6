#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "qhdef/liegroup.hpp"

using namespace qhdef;
using Cplx = std::complex<double>;

namespace {
const std::vector<std::string> kAllModels = {"su2", "so3", "t2", "sl2r"};
}

TEST_CASE("models: basis independence, pairing invariance, membership of exp") {
  for (const auto& name : kAllModels) {
    CAPTURE(name);
    auto m = GroupModel::by_name(name);

    // Gram matrix of the invariant pairing on the basis is invertible
    RMat gram(m->dim(), m->dim());
    for (int i = 0; i < m->dim(); ++i)
      for (int j = 0; j < m->dim(); ++j)
        gram(i, j) = m->pair(m->basis_vector(i), m->basis_vector(j));
    CHECK(std::abs(gram.determinant()) > 1e-6);

    for (int k = 0; k < 16; ++k) {
      auto a = m->sample_algebra(mix_seed(7, k), 0.8);
      auto b = m->sample_algebra(mix_seed(8, k), 0.8);
      auto c = m->sample_algebra(mix_seed(9, k), 0.8);
      CHECK(m->pair(a, b) == doctest::Approx(m->pair(b, a)).epsilon(1e-12));
      // ad-invariance <[c,a],b> + <a,[c,b]> = 0
      CHECK(std::abs(m->pair(ad(c, a), b) + m->pair(a, ad(c, b))) < 1e-10);
      // exp of scaled basis elements stays in the group
      const double s = -1.5 + 0.4 * k;
      CHECK(m->is_group(m->exp({s * m->basis_vector(k % m->dim()).mat}).mat));
    }
  }
}

TEST_CASE("exp: identity, abelian closed form, Taylor oracle") {
  auto su2 = GroupModel::by_name("su2");
  CHECK((su2->exp(su2->zero()).mat - Mat::Identity(2, 2)).norm() < 1e-15);

  auto t2 = GroupModel::by_name("t2");
  const double th1 = 0.7, th2 = -1.3;
  Mat x = Mat::Zero(2, 2);
  x(0, 0) = Cplx(0, th1);
  x(1, 1) = Cplx(0, th2);
  Mat g = t2->exp({x}).mat;
  CHECK(std::abs(g(0, 0) - std::exp(Cplx(0, th1))) < 1e-14);
  CHECK(std::abs(g(1, 1) - std::exp(Cplx(0, th2))) < 1e-14);

  // (pi/2) i sigma_3-like element against a high-order Taylor oracle
  Mat v = (M_PI / 2.0) * su2->basis_vector(2).mat;
  CHECK((su2->exp({v}).mat - oracles::exp_taylor(v)).norm() < 1e-12);
  for (const auto& name : kAllModels) {
    auto m = GroupModel::by_name(name);
    for (int k = 0; k < 8; ++k) {
      Mat a = m->sample_algebra(mix_seed(21, k), 1.2).mat;
      CHECK((m->exp({a}).mat - oracles::exp_taylor(a)).norm() < 1e-12);
    }
  }
}

TEST_CASE("log: identity, roundtrip, Rodrigues oracle, domain guard") {
  auto su2 = GroupModel::by_name("su2");
  CHECK(su2->log(su2->identity()).mat.norm() < 1e-14);

  for (const auto& name : kAllModels) {
    auto m = GroupModel::by_name(name);
    for (int k = 0; k < 24; ++k) {
      auto x = m->sample_algebra(mix_seed(33, k), 0.5 * m->log_radius() / std::sqrt(3.0));
      CHECK((m->log(m->exp(x)).mat - x.mat).norm() < 1e-9);
    }
  }

  auto so3 = GroupModel::by_name("so3");
  const double angle = 0.9;
  double n[3] = {0.36, -0.48, 0.8};  // unit axis
  GroupElement rot{oracles::rodrigues_rotation(angle, n[0], n[1], n[2])};
  CHECK((so3->log(rot).mat - oracles::axis_angle_skew(angle, n[0], n[1], n[2])).norm() < 1e-12);

  // rotation by angle > log_radius bound in operator norm
  GroupElement far{oracles::rodrigues_rotation(2.8, 1.0, 0.0, 0.0)};
  CHECK_THROWS_AS((void)so3->log(far), std::domain_error);
}

TEST_CASE("ad and Ad") {
  auto su2 = GroupModel::by_name("su2");
  auto x = su2->sample_algebra(11, 1.0);
  CHECK(ad(x, x).mat.norm() < 1e-15);

  auto t2 = GroupModel::by_name("t2");
  CHECK(ad(t2->sample_algebra(1, 1.0), t2->sample_algebra(2, 1.0)).mat.norm() < 1e-15);

  // su2 structure constants [b_a, b_b] = eps_abc b_c
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Mat expected = Mat::Zero(2, 2);
      const int c = 3 - a - b;
      if (a != b) {
        const double eps = ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
        expected = eps * su2->basis_vector(c).mat;
      }
      CHECK((ad(su2->basis_vector(a), su2->basis_vector(b)).mat - expected).norm() < 1e-15);
    }

  CHECK((Ad(su2->identity(), x).mat - x.mat).norm() < 1e-15);
  CHECK((Ad(su2->exp(x), x).mat - x.mat).norm() < 1e-13);

  // Ad(g, x) against a central difference of s -> g exp(s x) g^-1
  auto g = su2->sample_group(77, 0.9);
  const double eps = 1e-5;
  Mat fd = (g.mat * su2->exp({eps * x.mat}).mat * g.mat.inverse() -
            g.mat * su2->exp({-eps * x.mat}).mat * g.mat.inverse()) /
           (2 * eps);
  CHECK((Ad(g, x).mat - fd).norm() < 1e-9);

  // algebra map and pairing invariance properties
  for (const auto& name : kAllModels) {
    auto m = GroupModel::by_name(name);
    for (int k = 0; k < 12; ++k) {
      auto a = m->sample_algebra(mix_seed(41, k), 1.0);
      auto b = m->sample_algebra(mix_seed(42, k), 1.0);
      auto h = m->sample_group(mix_seed(43, k), 0.8);
      CHECK((Ad(h, ad(a, b)).mat - ad(Ad(h, a), Ad(h, b)).mat).norm() < 1e-10);
      CHECK(std::abs(m->pair(Ad(h, a), Ad(h, b)) - m->pair(a, b)) < 1e-10);
    }
  }
}

TEST_CASE("pairing: su2 Gram determinant") {
  auto su2 = GroupModel::by_name("su2");
  RMat gram(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      gram(i, j) = su2->pair(su2->basis_vector(i), su2->basis_vector(j));
  // <b_a, b_b> = -delta_ab / 2 for the spin basis
  CHECK((gram + 0.5 * RMat::Identity(3, 3)).norm() < 1e-14);
  CHECK(std::abs(gram.determinant()) == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("dexp: identity at 0, abelian, finite-difference oracle") {
  auto su2 = GroupModel::by_name("su2");
  auto v = su2->sample_algebra(5, 1.0);
  CHECK((dexp(su2->zero(), v).mat - v.mat).norm() < 1e-15);

  auto t2 = GroupModel::by_name("t2");
  auto xv = t2->sample_algebra(6, 1.0);
  auto vv = t2->sample_algebra(7, 1.0);
  CHECK((dexp(xv, vv).mat - vv.mat).norm() < 1e-15);

  for (const auto& name : kAllModels) {
    auto m = GroupModel::by_name(name);
    for (int k = 0; k < 8; ++k) {
      Mat x = m->sample_algebra(mix_seed(51, k), 0.5).mat;
      Mat w = m->sample_algebra(mix_seed(52, k), 1.0).mat;
      CHECK((dexp({x}, {w}).mat - oracles::dexp_fd(*m, x, w)).norm() < 1e-8);
    }
  }
}

TEST_CASE("dexp oracle agreement at |x| <= 1 (acceptance scale 1e-7)") {
  for (const auto& name : kAllModels) {
    auto m = GroupModel::by_name(name);
    double worst = 0.0;
    for (int k = 0; k < 16; ++k) {
      Mat x = m->sample_algebra(mix_seed(61, k), 1.0 / std::sqrt(3.0)).mat;
      Mat w = m->sample_algebra(mix_seed(62, k), 1.0).mat;
      worst = std::max(worst, (dexp({x}, {w}).mat - oracles::dexp_fd(*m, x, w)).norm());
    }
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("dexp_op and dexp_inv") {
  auto su2 = GroupModel::by_name("su2");
  auto x = su2->sample_algebra(71, 0.8);
  auto v = su2->sample_algebra(72, 1.0);
  CHECK(su2->dexp_invertible(x));
  auto w = su2->dexp_inv(x, v);
  CHECK((dexp(x, w).mat - v.mat).norm() < 1e-12);

  // su2: dexp_x singular exactly when the rotation angle of ad_x hits 2 pi
  RVec c(3);
  c << 2.0 * M_PI, 0.0, 0.0;
  CHECK_FALSE(su2->dexp_invertible(su2->from_coords(c)));
}

TEST_CASE("sinhc_ad difference quotients match the literal expressions") {
  auto su2 = GroupModel::by_name("su2");
  auto x = su2->sample_algebra(81, 0.9);
  auto v = su2->sample_algebra(82, 1.0);
  for (double t : {1.0, 0.25, 1.0 / 64.0}) {
    GroupElement ep = su2->exp({t * x.mat}), em = su2->exp({-t * x.mat});
    Mat quotient = (Ad(em, v).mat - Ad(ep, v).mat) / (2.0 * t);
    Mat series = -ad(x, sinhc_ad(x, v, t)).mat;
    CHECK((quotient - series).norm() < 1e-12);
  }
  // t = 0 limit is -ad_x
  CHECK((-ad(x, sinhc_ad(x, v, 0.0)).mat + ad(x, v).mat).norm() < 1e-15);
}

TEST_CASE("sampling: determinism, zero scale, coefficient bounds") {
  for (const auto& name : kAllModels) {
    auto m = GroupModel::by_name(name);
    auto a1 = m->sample_algebra(12345, 0.7);
    auto a2 = m->sample_algebra(12345, 0.7);
    CHECK((a1.mat - a2.mat).norm() == 0.0);

    CHECK(m->sample_algebra(4, 0.0).mat.norm() == 0.0);
    CHECK((m->sample_group(4, 0.0).mat - Mat::Identity(m->matrix_size(), m->matrix_size())).norm() ==
          0.0);

    for (int k = 0; k < 8; ++k) {
      RVec c = m->coords(m->sample_algebra(mix_seed(99, k), 0.7).mat);
      CHECK(c.cwiseAbs().maxCoeff() <= 0.7 + 1e-12);
    }
  }
}

TEST_CASE("broken models are rejected loudly") {
  auto su2 = GroupModel::by_name("su2");

  // dependent basis fails construction
  std::vector<Mat> dependent = {su2->basis_vector(0).mat, su2->basis_vector(1).mat,
                                Mat(su2->basis_vector(0).mat + su2->basis_vector(1).mat)};
  CHECK_THROWS_AS(GroupModel("bad", dependent, [](const Mat&) { return 0.0; }),
                  std::invalid_argument);

  // a membership check the exponential cannot satisfy flags the model on use
  std::vector<Mat> basis = {su2->basis_vector(0).mat, su2->basis_vector(1).mat,
                            su2->basis_vector(2).mat};
  GroupModel broken("broken", basis, [](const Mat&) { return 1.0; });
  CHECK_THROWS_AS((void)broken.exp(broken.sample_algebra(1, 0.5)), std::runtime_error);
}

TEST_CASE("coords roundtrip and span residual") {
  for (const auto& name : kAllModels) {
    auto m = GroupModel::by_name(name);
    auto x = m->sample_algebra(3, 1.0);
    CHECK((m->from_coords(m->coords(x.mat)).mat - x.mat).norm() < 1e-13);
    CHECK(m->is_algebra(x.mat));
  }
  // something clearly off the algebra
  auto su2 = GroupModel::by_name("su2");
  Mat off = Mat::Identity(2, 2);  // not traceless anti-Hermitian
  CHECK_FALSE(su2->is_algebra(off));
}
