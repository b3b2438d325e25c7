#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cmc/profile.hpp"
#include "cmc/surface.hpp"
#include "oracles.hpp"

using namespace cmc;

namespace {

// Raw defining formula, independent of the library's factored form.
double f_raw(double H, double d, double r) {
  const double s = std::sinh(r), g = d + 2.0 * H * std::cosh(r);
  return s * s - g * g;
}

}  // namespace

TEST(FandG, Examples) {
  auto a = f_and_g(ProfileParams::make(0.0, 0.0), 1.0);
  EXPECT_NEAR(a.f, std::sinh(1.0) * std::sinh(1.0), 1e-15);
  EXPECT_NEAR(a.f, 1.3810978455418157, 1e-15);
  EXPECT_EQ(a.g, 0.0);

  auto b = f_and_g(ProfileParams::make(0.5, -1.0), 0.0);
  EXPECT_EQ(b.f, 0.0);
  EXPECT_EQ(b.g, 0.0);

  auto c = f_and_g(ProfileParams::make(1.0, -2.0), std::acosh(5.0 / 3.0));
  EXPECT_NEAR(c.f, 0.0, 1e-14);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uH(0.0, 0.49), ud(-3.0, 3.0), ur(0.0, 4.0);
  for (int i = 0; i < 100; ++i) {
    const auto p = ProfileParams::make(uH(rng), ud(rng));
    const auto v = f_and_g(p, ur(rng));
    EXPECT_NEAR(v.f, v.f_expanded, 1e-11 * std::max(1.0, std::abs(v.f)));
  }
}

TEST(Params, NormalizationAndAdmissibility) {
  auto p = ProfileParams::make(-0.3, 0.2);
  EXPECT_EQ(p.H(), 0.3);
  EXPECT_EQ(p.d(), -0.2);
  EXPECT_EQ(ProfileParams::make(0.0, -1.5).d(), 1.5);
  EXPECT_THROW(ProfileParams::make(0.5, 0.5), DomainError);
  EXPECT_THROW(ProfileParams::make(1.0, -1.0), DomainError);
  EXPECT_NO_THROW(ProfileParams::make(1.0, -std::sqrt(3.0)));
  // Inexact input snaps to the special value.
  EXPECT_EQ(ProfileParams::make(0.3, -0.6 + 1e-15).d(), -0.6);
  EXPECT_EQ(ProfileParams::make(0.3, -0.6 + 1e-15).family(), FamilyClass::EntireGraph);
}

TEST(Thresholds, Examples) {
  auto a = thresholds(ProfileParams::make(0.5, -1.0));
  EXPECT_EQ(a.rho1, 0.0);
  EXPECT_FALSE(a.rho0);
  EXPECT_FALSE(a.rho2);

  auto b = thresholds(ProfileParams::make(1.0, -2.0));
  EXPECT_EQ(b.rho1, 0.0);
  ASSERT_TRUE(b.rho2);
  EXPECT_NEAR(*b.rho2, std::acosh(5.0 / 3.0), 1e-14);
  EXPECT_NEAR(*b.rho2, 1.0986122886681098, 1e-14);
  const double root = test::bisect([](double r) { return f_raw(1.0, -2.0, r); }, 0.5, 2.0);
  EXPECT_NEAR(*b.rho2, root, 1e-12);

  auto c = thresholds(ProfileParams::make(0.25, -0.5));
  EXPECT_EQ(c.rho1, 0.0);
}

TEST(Thresholds, InvariantsAgainstBisection) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double H = 2.0 * u(rng);
    double d = -4.0 + 8.0 * u(rng);
    if (H > 0.5) d = -std::sqrt(4 * H * H - 1) - 3.0 * u(rng) - 1e-3;
    if (H == 0.5 && d >= 0) d = -d - 0.1;
    const auto p = ProfileParams::make(H, d);
    const auto dom = thresholds(p);
    auto fr = [&](double r) { return f_raw(p.H(), p.d(), r); };
    // The raw form cancels two terms of size sinh^2.
    auto ftol = [](double r) { return 1e-13 * std::max(1.0, std::sinh(r) * std::sinh(r)); };
    EXPECT_NEAR(fr(dom.rho1), 0.0, ftol(dom.rho1));
    if (dom.rho1 > 1e-3) {
      const double lo = dom.rho1 * 0.5, hi = dom.rho2 ? 0.5 * (dom.rho1 + *dom.rho2) : dom.rho1 * 2 + 1;
      EXPECT_NEAR(test::bisect(fr, lo, hi), dom.rho1, 1e-10);
    }
    if (dom.rho2) {
      EXPECT_LT(dom.rho1, *dom.rho2);
      EXPECT_NEAR(fr(*dom.rho2), 0.0, ftol(*dom.rho2));
    }
    if (dom.rho0) {
      EXPECT_LE(dom.rho1, *dom.rho0);
      EXPECT_NEAR(p.d() + 2 * p.H() * std::cosh(*dom.rho0), 0.0, 1e-12 * std::max(1.0, std::abs(p.d())));
      if (dom.rho2) EXPECT_LT(*dom.rho0, *dom.rho2);
    }
  }
}

TEST(LambdaEval, ClosedFormEntireGraphHalf) {
  const auto p = ProfileParams::make(0.5, -1.0);
  EXPECT_NEAR(lambda_eval(p, 2.0), 2.0 * (std::cosh(1.0) - 1.0), 1e-10);
  EXPECT_NEAR(2.0 * (std::cosh(1.0) - 1.0), 1.0861612696304874, 1e-15);
}

TEST(LambdaEval, EmptyIntegralAtRho1) {
  for (auto [H, d] : {std::pair{0.25, 1.0}, {0.0, 2.0}, {1.0, -3.0}, {0.5, -0.5}}) {
    const auto p = ProfileParams::make(H, d);
    EXPECT_EQ(lambda_eval(p, thresholds(p).rho1), 0.0);
  }
}

TEST(LambdaEval, EntireGraphMatchesMidpointOracle) {
  const double H = 0.3, d = -0.6;
  auto integrand = [&](double r) {
    const double g = d + 2 * H * std::cosh(r);
    const double f = f_raw(H, d, r);
    return f <= 0 ? 0.0 : g / std::sqrt(f);
  };
  const double oracle = test::midpoint_rule(integrand, 0.0, 1.0, 1'000'000);
  const double value = lambda_eval(ProfileParams::make(H, d), 1.0);
  EXPECT_NEAR(value, oracle, 1e-7);
  EXPECT_NEAR(value, 0.14713728785808783, 1e-10);  // 30-digit reference
}

TEST(LambdaEval, SingularEndpointsAgainstReference) {
  // 30-digit references (mpmath) for integrals with vertical tangents.
  EXPECT_NEAR(lambda_eval(ProfileParams::make(0.25, 1.0), 2.0), 1.2333258193444215, 1e-10);
  const auto und = ProfileParams::make(1.0, -1.8);
  EXPECT_NEAR(lambda_eval(und, *thresholds(und).rho2), 1.7017434634536497, 1e-10);
  const auto nod = ProfileParams::make(1.0, -3.0);
  EXPECT_NEAR(lambda_eval(nod, *thresholds(nod).rho2), 0.60750299429429208, 1e-10);
  const auto sph = ProfileParams::make(0.6, -1.2);
  EXPECT_NEAR(lambda_eval(sph, *thresholds(sph).rho2), 3.5642649221066137, 1e-10);
}

TEST(LambdaEval, SingularEndpointAgainstSubstitutedMidpoint) {
  // Oracle: the substitution r = rho1 + t^2 applied to the raw integrand.
  const double H = 0.25, d = 1.0;
  const double rho1 = test::bisect([&](double r) { return f_raw(H, d, r); }, 0.1, 5.0);
  auto integrand = [&](double t) {
    const double r = rho1 + t * t;
    const double f = f_raw(H, d, r);
    return f <= 0 ? 0.0 : 2 * t * (d + 2 * H * std::cosh(r)) / std::sqrt(f);
  };
  const double oracle = test::midpoint_rule(integrand, 0.0, std::sqrt(3.0 - rho1), 1'000'000);
  EXPECT_NEAR(lambda_eval(ProfileParams::make(H, d), 3.0), oracle, 1e-6);
}

TEST(LambdaEval, OutsideDomainThrows) {
  const auto p = ProfileParams::make(1.0, -3.0);
  EXPECT_THROW(lambda_eval(p, 0.1), DomainError);
  EXPECT_THROW(lambda_eval(p, 5.0), DomainError);
  EXPECT_THROW(lambda_prime(ProfileParams::make(0.0, 1.0), 0.5), DomainError);
}

TEST(LambdaPrime, Examples) {
  EXPECT_EQ(lambda_prime(ProfileParams::make(0.5, -1.0), 0.0), 0.0);
  const auto p = ProfileParams::make(0.25, 1.0);
  const double lp = lambda_prime(p, thresholds(p).rho1);
  EXPECT_TRUE(std::isinf(lp));
  EXPECT_GT(lp, 0.0);
  const auto q = ProfileParams::make(1.0, -3.0);
  EXPECT_NEAR(lambda_prime(q, *thresholds(q).rho0), 0.0, 1e-12);
  // Closed form of the entire graph's slope.
  for (double H : {0.1, 0.3, 0.5}) {
    const auto e = ProfileParams::make(H, -2 * H);
    for (double r : {0.2, 1.0, 3.0}) {
      const double c = std::cosh(r);
      const double closed = 2 * H * std::sqrt(c - 1) / std::sqrt((1 - 4 * H * H) * c + 4 * H * H + 1);
      EXPECT_NEAR(lambda_prime(e, r), closed, 1e-13);
    }
  }
}

TEST(MinimalLambda, Examples) {
  for (double r : {0.0, 1.0, 7.0}) EXPECT_EQ(minimal_lambda(0.0, r), 0.0);
  EXPECT_EQ(minimal_lambda(2.0, std::asinh(2.0)), 0.0);
  EXPECT_THROW(minimal_lambda(1.0, 0.5), DomainError);
  EXPECT_NEAR(minimal_lambda(1.0, 30.0), 0.5 * catenoid_height(1.0), 1e-7);
}

TEST(MinimalArclength, Examples) {
  for (double d : {0.5, 1.0, 3.0}) {
    const auto a = minimal_arclength(d, 0.0);
    EXPECT_NEAR(a.rho, std::asinh(d), 1e-14);
    EXPECT_EQ(a.lambda, 0.0);
  }
  const auto b = minimal_arclength(1.0, 1.0);
  EXPECT_NEAR(b.rho, 1.4163102415393713, 1e-13);
  // Same point of the curve through the rho-parametrization.
  EXPECT_NEAR(b.lambda, minimal_lambda(1.0, b.rho), 1e-9);
}

TEST(MinimalArclength, UnitSpeed) {
  const double d = 0.7, eps = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const double s = 0.05 + 0.04 * i;
    const auto p = minimal_arclength(d, s + eps, 1e-14), m = minimal_arclength(d, s - eps, 1e-14);
    const double dr = (p.rho - m.rho) / (2 * eps), dl = (p.lambda - m.lambda) / (2 * eps);
    EXPECT_LT(std::abs(dr * dr + dl * dl - 1.0), 1e-8);
  }
}

TEST(CatenoidHeight, Limits) {
  EXPECT_LT(catenoid_height(1e-6), 1e-4);
  EXPECT_LT(catenoid_height(1e-3), catenoid_height(1e-2));
  EXPECT_NEAR(catenoid_height(1e-3), 0.016588095633181240, 1e-9);
  EXPECT_LT(std::abs(catenoid_height(1000.0) - std::numbers::pi), 0.01);
  EXPECT_LT(catenoid_height(1000.0), std::numbers::pi);
  EXPECT_THROW(catenoid_height(0.0), DomainError);
}

TEST(CatenoidHeight, MatchesMidpointOracle) {
  const double d = 1.0;
  auto integrand = [d](double t) { return d / std::sqrt((1 + d * d) * std::cosh(t) * std::cosh(t) - 1); };
  const double oracle = 2.0 * test::midpoint_rule(integrand, 0.0, 40.0, 1'000'000);
  EXPECT_NEAR(catenoid_height(d), oracle, 1e-7);
  EXPECT_NEAR(catenoid_height(d), 2.6220575542921198, 1e-10);
}

TEST(CatenoidHeight, NondecreasingAndBelowPi) {
  double prev = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double d = std::pow(10.0, -3.0 + 6.0 * i / 60.0);
    const double h = catenoid_height(d);
    EXPECT_GT(h, 0.0);
    EXPECT_LT(h, std::numbers::pi);
    EXPECT_LE(prev, h + 1e-9);
    prev = h;
  }
}

TEST(CatenoidHeightDerivative, PositiveAndMatchesFiniteDifference) {
  EXPECT_GT(catenoid_height_derivative(1.0), 0.0);
  const double fd = (catenoid_height(1.001, 1e-13) - catenoid_height(0.999, 1e-13)) / 0.002;
  EXPECT_LT(std::abs(catenoid_height_derivative(1.0) - fd), 1e-5);
  EXPECT_NEAR(catenoid_height_derivative(1.0), 0.71195865977826380, 1e-9);
  EXPECT_THROW(catenoid_height_derivative(-1.0), DomainError);
}

TEST(CatenoidHeightDerivative, ChangeOfVariablesOracle) {
  // u = cosh t:  h'(d) = 2 int_1^inf sqrt(u^2-1) / ((1+d^2) u^2 - 1)^{3/2} du,
  // then u = 1 + v^2 / (1 - v) maps (0, 1) onto (1, inf) smoothly enough for
  // the midpoint rule.
  for (double d : {0.5, 1.0, 4.0}) {
    const double k = 1 + d * d;
    auto integrand = [k](double v) {
      const double u = 1 + v * v / (1 - v);
      const double du = (2 * v * (1 - v) + v * v) / ((1 - v) * (1 - v));
      const double q = k * u * u - 1;
      return std::sqrt(u * u - 1) / (q * std::sqrt(q)) * du;
    };
    const double oracle = 2 * test::midpoint_rule(integrand, 0.0, 1.0, 2'000'000);
    EXPECT_NEAR(catenoid_height_derivative(d), oracle, 1e-9) << "d = " << d;
  }
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(0, 0), FamilyClass::MinimalSlice);
  EXPECT_EQ(classify(0, 2), FamilyClass::MinimalCatenoid);
  EXPECT_EQ(classify(0, -2), FamilyClass::MinimalCatenoid);
  EXPECT_EQ(classify(0.5, -1), FamilyClass::EntireGraph);
  EXPECT_EQ(classify(1, -std::sqrt(3.0)), FamilyClass::Cylinder);
  EXPECT_EQ(classify(1, -1.8), FamilyClass::Unduloid);
  EXPECT_EQ(classify(1, -3), FamilyClass::Nodoid);
  EXPECT_EQ(classify(1, -2), FamilyClass::Sphere);
  EXPECT_EQ(classify(1, -1), FamilyClass::Inadmissible);
  EXPECT_EQ(classify(0.3, 0.1), FamilyClass::EmbeddedAnnulus);
  EXPECT_EQ(classify(0.3, -0.6), FamilyClass::EntireGraph);
  EXPECT_EQ(classify(0.3, -0.7), FamilyClass::ImmersedAnnulus);
  EXPECT_EQ(classify(0.5, 0.0), FamilyClass::Inadmissible);
  EXPECT_EQ(classify(0.5, -0.5), FamilyClass::EmbeddedAnnulus);
  EXPECT_EQ(classify(0.5, -1.5), FamilyClass::ImmersedAnnulus);
  EXPECT_EQ(classify(NAN, 1.0), FamilyClass::Inadmissible);
}

TEST(Classify, BoundaryTolerance) {
  EXPECT_EQ(classify(0.3, -0.6 * (1 + 5e-13)), FamilyClass::EntireGraph);
  EXPECT_EQ(classify(0.3, -0.6 * (1 + 1e-9)), FamilyClass::ImmersedAnnulus);
  EXPECT_EQ(classify(1, -std::sqrt(3.0) * (1 - 1e-13)), FamilyClass::Cylinder);
  EXPECT_EQ(classify(0.5 * (1 + 1e-13), -1.0), FamilyClass::EntireGraph);
}

TEST(Classify, InvariantUnderReflection) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uH(-2.0, 2.0), ud(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double H = uH(rng), d = ud(rng);
    EXPECT_EQ(classify(H, d), classify(-H, -d));
  }
}

TEST(ClassifyVanishingQ, Cases) {
  auto a = classify_vanishing_Q(0.0);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].family, FamilyClass::MinimalSlice);
  auto b = classify_vanishing_Q(1.0);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].family, FamilyClass::Sphere);
  auto c = classify_vanishing_Q(0.5);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].family, FamilyClass::EntireGraph);
  auto d = classify_vanishing_Q(0.3);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].family, FamilyClass::EntireGraph);
  EXPECT_EQ(d[1].family, FamilyClass::EmbeddedAnnulus);
  EXPECT_DOUBLE_EQ(d[1].d, 0.6);
  EXPECT_EQ(classify(0.3, d[1].d), FamilyClass::EmbeddedAnnulus);
}

TEST(SpecialRadii, Values) {
  const auto r = special_radii(1.0);
  EXPECT_NEAR(r.sphere_rho2, std::acosh(5.0 / 3.0), 1e-15);
  EXPECT_NEAR(r.cylinder_rho, std::acosh(2.0 / std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(*thresholds(ProfileParams::make(1.0, -2.0)).rho2, r.sphere_rho2, 1e-12);
  EXPECT_LT(special_radii(100.0).sphere_rho2, 0.03);
  for (double H : {0.51, 0.7, 1.0, 3.0, 50.0}) {
    const auto s = special_radii(H);
    EXPECT_GT(s.sphere_rho2, s.cylinder_rho);
  }
  EXPECT_THROW(special_radii(0.5), DomainError);
}

TEST(SpecialRadii, UnduloidLimit) {
  const double H = 1.0, s = std::sqrt(3.0);
  const auto dom = thresholds(ProfileParams::make(H, -s - 1e-8));
  const double lim = special_radii(H).unduloid_limit_rho;
  EXPECT_LT(dom.rho1, lim);
  EXPECT_GT(*dom.rho2, lim);
  EXPECT_NEAR(dom.rho1, lim, 1e-3);
  EXPECT_NEAR(*dom.rho2, lim, 1e-3);
}

TEST(GenerateProfile, Examples) {
  auto cat = generate_profile(ProfileParams::make(0.0, 1.0), 100);
  EXPECT_NEAR(cat.samples.front().rho, std::asinh(1.0), 1e-15);
  EXPECT_NEAR(cat.samples.front().rho, 0.88137358701954305, 1e-15);
  EXPECT_EQ(cat.samples.front().lambda, 0.0);
  EXPECT_EQ(cat.extension, Extension::ReflectAcrossSlice);

  auto half = generate_profile(ProfileParams::make(0.5, -1.0), 200, 1e-10, {.rho_max = 5.0});
  for (const auto& s : half.samples) EXPECT_NEAR(s.lambda, 2 * (std::cosh(s.rho / 2) - 1), 1e-10);
  EXPECT_EQ(half.extension, Extension::None);

  auto und = generate_profile(ProfileParams::make(1.0, -1.8), 50);
  EXPECT_EQ(und.extension, Extension::PeriodicVertical);
  ASSERT_TRUE(und.period);
  EXPECT_GT(*und.period, 0.0);
  EXPECT_NEAR(*und.period, 2 * 1.7017434634536497, 1e-9);

  auto nod = generate_profile(ProfileParams::make(1.0, -3.0), 50);
  EXPECT_EQ(nod.extension, Extension::PeriodicVertical);
  EXPECT_NEAR(*nod.period, 2 * 0.60750299429429208, 1e-9);

  auto sph = generate_profile(ProfileParams::make(1.0, -2.0), 50);
  EXPECT_EQ(sph.extension, Extension::ReflectAcrossSlice);
  EXPECT_TRUE(std::isinf(sph.samples.back().lambda_prime));
  EXPECT_EQ(sph.samples.front().lambda_prime, 0.0);

  auto slice = generate_profile(ProfileParams::make(0.0, 0.0), 10);
  EXPECT_EQ(slice.extension, Extension::None);
  for (const auto& s : slice.samples) EXPECT_EQ(s.lambda, 0.0);

  auto cyl = generate_profile(ProfileParams::make(1.0, -std::sqrt(3.0)), 10);
  EXPECT_EQ(cyl.extension, Extension::PeriodicVertical);
  for (const auto& s : cyl.samples) EXPECT_NEAR(s.rho, special_radii(1.0).cylinder_rho, 1e-12);

  EXPECT_THROW(generate_profile(ProfileParams::make(0.0, 1.0), 1), DomainError);
}

namespace {

ProfileParams random_params(std::mt19937_64& rng, int regime) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (regime) {
    case 0: return ProfileParams::make(0.0, 3.0 * u(rng));
    case 1: return ProfileParams::make(0.49 * u(rng) + 0.005, -3.0 + 6.0 * u(rng));
    case 2: return ProfileParams::make(0.5, -0.01 - 3.0 * u(rng));
    default: {
      const double H = 0.51 + 2.0 * u(rng);
      return ProfileParams::make(H, -std::sqrt(4 * H * H - 1) - 1e-3 - 3.0 * u(rng));
    }
  }
}

}  // namespace

TEST(GenerateProfile, FirstIntegralHoldsAtEverySample) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 80; ++i) {
    const auto p = random_params(rng, i % 4);
    const auto c = generate_profile(p, 60);
    EXPECT_LE(mean_curvature_residual(c), 1e-10) << "H=" << p.H() << " d=" << p.d();
  }
}

TEST(GenerateProfile, MonotonicityPattern) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 80; ++i) {
    const auto p = random_params(rng, 1 + i % 3);
    const auto c = generate_profile(p, 80, 1e-10, {.rho_max = 8.0});
    const auto& dom = c.domain;
    const double turn = dom.rho0.value_or(dom.rho1);
    for (std::size_t k = 1; k < c.samples.size(); ++k) {
      const auto& a = c.samples[k - 1];
      const auto& b = c.samples[k];
      if (b.rho <= turn) EXPECT_LE(b.lambda, a.lambda + 1e-12);
      if (a.rho >= turn) EXPECT_GE(b.lambda, a.lambda - 1e-12);
    }
  }
}

TEST(GenerateProfile, UnboundedGrowth) {
  // lambda' -> 2H / sqrt(1 - 4H^2) at infinity (infinite for H = 1/2), so
  // lambda(30) > 10 once H >= 0.16; smaller H grows linearly but slower.
  for (double H : {0.2, 0.3, 0.4, 0.5}) {
    for (double d : {-2.0, -2 * H, 0.0, 1.5}) {
      if (H == 0.5 && d >= 0) continue;
      const auto c = generate_profile(ProfileParams::make(H, d), 100);
      EXPECT_GT(c.samples.back().lambda, 10.0) << H << " " << d;
      const std::size_t n = c.samples.size();
      EXPECT_GT(c.samples[n - 1].lambda, c.samples[n / 2].lambda);
    }
  }
  const auto slow = generate_profile(ProfileParams::make(0.05, 0.3), 100);
  const double slope = (slow.samples.back().lambda - lambda_eval(slow.params, 20.0)) / 10.0;
  EXPECT_NEAR(slope, 0.1 / std::sqrt(1 - 0.01), 1e-6);
}

TEST(GenerateProfile, ConvergesToDoubleCap) {
  const double H = 0.3;
  const auto cap = ProfileParams::make(H, -2 * H);
  double prev = 1e9;
  for (int k : {2, 4, 6, 8}) {
    for (double sign : {1.0, -1.0}) {
      const auto p = ProfileParams::make(H, -2 * H + sign * std::pow(10.0, -k));
      const auto c = generate_profile(p, 60, 1e-12, {.rho_max = 5.0});
      double dev = 0.0;
      for (const auto& s : c.samples) dev = std::max(dev, std::abs(s.lambda - lambda_eval(cap, s.rho, 1e-12)));
      EXPECT_LT(dev, prev * 1.0001) << "k=" << k;
      if (sign < 0) prev = dev;
    }
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(ExtendedCurve, ReflectionAndSphereClosure) {
  const auto ann = generate_profile(ProfileParams::make(0.3, 0.2), 30, 1e-10, {.rho_max = 4.0});
  const auto ext = extended_curve(ann);
  ASSERT_EQ(ext.size(), 2 * ann.samples.size() - 1);
  for (std::size_t i = 0; i < ext.size(); ++i) {
    const auto& a = ext[i];
    const auto& b = ext[ext.size() - 1 - i];
    EXPECT_EQ(a.rho, b.rho);
    EXPECT_NEAR(a.t, -b.t, 1e-15);
  }
  const auto sph = generate_profile(ProfileParams::make(2.0, -4.0), 30);
  const auto closed = extended_curve(sph);
  EXPECT_EQ(closed.front().rho, 0.0);
  EXPECT_EQ(closed.back().rho, 0.0);
}
