#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cmc/hyperbolic.hpp"

using namespace cmc;

namespace {

DiskPoint random_disk_point(std::mt19937_64& rng, double max_r = 0.95) {
  std::uniform_real_distribution<double> ur(0.0, max_r), ua(-std::numbers::pi, std::numbers::pi);
  const double r = ur(rng), a = ua(rng);
  return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace

TEST(DiskPoint, RejectsBoundaryAndExterior) {
  EXPECT_THROW(DiskPoint(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(DiskPoint(0.8, 0.8), std::invalid_argument);
  EXPECT_THROW(DiskPoint(NAN, 0.0), std::invalid_argument);
  EXPECT_NO_THROW(DiskPoint(0.999, 0.0));
  EXPECT_THROW(HalfPlanePoint(0.0, 0.0), std::invalid_argument);
}

TEST(ConformalFactor, Values) {
  EXPECT_DOUBLE_EQ(conformal_factor({0.0, 0.0}), 2.0);
  const double c = std::cosh(0.5);
  EXPECT_NEAR(conformal_factor({std::tanh(0.5), 0.0}), 2.0 * c * c, 1e-14);
  EXPECT_NEAR(2.0 * c * c, 2.5430806348152437, 1e-15);
  EXPECT_GT(conformal_factor({0.999, 0.0}), 1000.0);
}

TEST(ConformalFactor, MinimumAtOrigin) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) EXPECT_GE(conformal_factor(random_disk_point(rng)), 2.0);
}

TEST(RhoToDisk, Examples) {
  for (double th : {0.0, 1.0, -2.5}) {
    const auto p = rho_to_disk(0.0, th);
    EXPECT_EQ(p.x(), 0.0);
    EXPECT_EQ(p.y(), 0.0);
  }
  EXPECT_NEAR(rho_to_disk(1.0, 0.0).x(), 0.46211715726000974, 1e-15);
  EXPECT_NEAR(rho_to_disk(2.0 * std::atanh(0.5), 0.0).x(), 0.5, 1e-15);
  EXPECT_THROW(rho_to_disk(-0.1, 0.0), DomainError);
}

TEST(DiskToRho, Examples) {
  const auto o = disk_to_rho({0.0, 0.0});
  EXPECT_EQ(o.rho, 0.0);
  EXPECT_EQ(o.theta, 0.0);
  const double x = std::tanh(0.5);
  auto a = disk_to_rho({x, 0.0});
  EXPECT_NEAR(a.rho, 1.0, 1e-14);
  EXPECT_NEAR(a.theta, 0.0, 1e-15);
  auto b = disk_to_rho({0.0, x});
  EXPECT_NEAR(b.rho, 1.0, 1e-14);
  EXPECT_NEAR(b.theta, std::numbers::pi / 2, 1e-15);
}

TEST(RhoToDisk, RoundTripAndDistance) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ur(0.0, 20.0), ua(-3.0, 3.0);
  const DiskPoint origin{0.0, 0.0};
  for (int i = 0; i < 500; ++i) {
    const double rho = ur(rng), th = ua(rng);
    // Beyond rho ~ 19 the point is rounded onto |z| = 1 in double.
    if (std::tanh(0.5 * rho) >= 1.0) continue;
    const auto p = rho_to_disk(rho, th);
    const auto back = disk_to_rho(p);
    // rho is recovered through atanh near |z| = 1, so its error grows like
    // the conditioning 2 cosh^2(rho/2) eps.
    const double ch = std::cosh(0.5 * rho);
    const double rho_tol = 1e-12 + 16.0 * ch * ch * 1.1e-16;
    EXPECT_NEAR(back.rho, rho, rho_tol);
    const auto q = rho_to_disk(back.rho, back.theta);
    EXPECT_NEAR(q.x(), p.x(), 1e-12);
    EXPECT_NEAR(q.y(), p.y(), 1e-12);
    EXPECT_NEAR(geodesic_distance(origin, p), rho, rho_tol);
  }
}

TEST(GeodesicDistance, AxiomsAndCollinearAdditivity) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto p = random_disk_point(rng), q = random_disk_point(rng), r = random_disk_point(rng);
    EXPECT_EQ(geodesic_distance(p, p), 0.0);
    EXPECT_NEAR(geodesic_distance(p, q), geodesic_distance(q, p), 1e-13);
    EXPECT_GE(geodesic_distance(p, q), 0.0);
    EXPECT_LE(geodesic_distance(p, r), geodesic_distance(p, q) + geodesic_distance(q, r) + 1e-12);
  }
  const double expect = disk_to_rho({0.6, 0.0}).rho - disk_to_rho({0.3, 0.0}).rho;
  EXPECT_NEAR(geodesic_distance(DiskPoint{0.3, 0.0}, DiskPoint{0.6, 0.0}), expect, 1e-14);
}

TEST(TranslateAlongGamma, IdentityAndDirection) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const auto p = random_disk_point(rng);
    const auto q = translate_along_gamma(p, 0.0);
    EXPECT_EQ(q.x(), p.x());
    EXPECT_EQ(q.y(), p.y());
  }
  for (double s : {0.3, 1.0, 2.5}) {
    const auto q = translate_along_gamma(DiskPoint{0.0, 0.0}, s);
    EXPECT_LT(q.x(), 0.0);  // toward -1
    EXPECT_NEAR(q.y(), 0.0, 1e-16);
    EXPECT_NEAR(geodesic_distance({0.0, 0.0}, q), s, 1e-13);
  }
}

TEST(TranslateAlongGamma, IsometryAndGroupLaw) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> us(-2.0, 2.0);
  for (int i = 0; i < 300; ++i) {
    const auto p = random_disk_point(rng, 0.8), q = random_disk_point(rng, 0.8);
    const double s = us(rng), s2 = us(rng);
    const double d0 = geodesic_distance(p, q);
    const double d1 = geodesic_distance(translate_along_gamma(p, s), translate_along_gamma(q, s));
    EXPECT_NEAR(d1, d0, 1e-10 * std::max(1.0, d0));
    const auto ab = translate_along_gamma(translate_along_gamma(p, s2), s);
    const auto direct = translate_along_gamma(p, s + s2);
    EXPECT_NEAR(ab.x(), direct.x(), 1e-10);
    EXPECT_NEAR(ab.y(), direct.y(), 1e-10);
  }
  const SpacePoint sp{{0.1, 0.2}, 3.25};
  EXPECT_EQ(translate_along_gamma(sp, 1.3).t, 3.25);
}

TEST(Cayley, OriginAndRoundTrip) {
  const auto h = disk_to_halfplane({0.0, 0.0});
  EXPECT_NEAR(h.x(), 0.0, 1e-16);
  EXPECT_NEAR(h.y(), 1.0, 1e-16);
  std::mt19937_64 rng(6);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto p = random_disk_point(rng, 0.9);
    const auto back = halfplane_to_disk(disk_to_halfplane(p));
    worst = std::max({worst, std::abs(back.x() - p.x()), std::abs(back.y() - p.y())});
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Cayley, PreservesDistance) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 3; ++i) {
    const auto p = random_disk_point(rng, 0.9), q = random_disk_point(rng, 0.9);
    EXPECT_NEAR(geodesic_distance(disk_to_halfplane(p), disk_to_halfplane(q)), geodesic_distance(p, q),
                1e-11);
  }
}

TEST(Cayley, Conformal) {
  // Pull-back of y^-2 |dw|^2 equals F^2 |dz|^2: compare lengths of small
  // displacements in two directions.
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_disk_point(rng, 0.8);
    const double eps = 1e-6;
    for (double ang : {0.0, 1.1, 2.3}) {
      const DiskPoint q{p.x() + eps * std::cos(ang), p.y() + eps * std::sin(ang)};
      const auto hp = disk_to_halfplane(p), hq = disk_to_halfplane(q);
      const double len_half = std::hypot(hq.x() - hp.x(), hq.y() - hp.y()) / hp.y();
      EXPECT_NEAR(len_half / eps, conformal_factor(p), 1e-4 * conformal_factor(p));
    }
  }
}

TEST(GeodesicCircle, EndpointsAtStatedDistance) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const auto c = random_disk_point(rng, 0.6);
    const double r = 0.5 + 0.1 * i;
    const auto circ = geodesic_circle_in_disk(c, r);
    for (double a : {0.0, 0.7, 2.0, 4.0}) {
      const DiskPoint b{circ.cx + circ.radius * std::cos(a), circ.cy + circ.radius * std::sin(a)};
      EXPECT_NEAR(geodesic_distance(c, b), r, 1e-10);
    }
  }
  const auto hc = geodesic_circle_in_halfplane({0.0, 1.0}, 1.0);
  const HalfPlanePoint top{hc.cx, hc.cy + hc.radius};
  EXPECT_NEAR(geodesic_distance(HalfPlanePoint{0.0, 1.0}, top), 1.0, 1e-13);
}

TEST(Geodesic, ReflectionIsInvolutiveIsometry) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_disk_point(rng, 0.7), b = random_disk_point(rng, 0.7);
    const auto g = Geodesic::through(a, b);
    const auto ra = g.reflect(a);
    EXPECT_NEAR(ra.x(), a.x(), 1e-10);
    EXPECT_NEAR(ra.y(), a.y(), 1e-10);
    const auto p = random_disk_point(rng, 0.7), q = random_disk_point(rng, 0.7);
    const auto rp = g.reflect(p), rq = g.reflect(q);
    EXPECT_NEAR(geodesic_distance(rp, rq), geodesic_distance(p, q), 1e-9);
    const auto rrp = g.reflect(rp);
    EXPECT_NEAR(rrp.x(), p.x(), 1e-10);
  }
  const auto diam = Geodesic::diameter(std::numbers::pi / 2);
  const auto r = diam.reflect(DiskPoint{0.3, 0.2});
  EXPECT_NEAR(r.x(), -0.3, 1e-15);
  EXPECT_NEAR(r.y(), 0.2, 1e-15);
}
