#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmc/hyperbolic.hpp"
#include "cmc/quadrature.hpp"

/// Rotational constant mean curvature surfaces in H^2 x R.
///
/// A rotational H-surface about the axis {0} x R is generated by a curve
/// (rho, lambda(rho)) in a vertical geodesic plane, where rho is the
/// distance to the axis and lambda satisfies the first integral
///
///     sinh(rho) * lambda' / sqrt(1 + lambda'^2) = d + 2H cosh(rho).
///
/// With g = d + 2H cosh(rho) and f = sinh^2(rho) - g^2 this gives
/// lambda' = g / sqrt(f), so lambda(rho) is the integral of g/sqrt(f) from the
/// first zero rho1 of f. The pair (H, d) determines the surface up to
/// isometry, and its family (catenoid, entire graph, unduloid, ...).
namespace cmc {

enum class FamilyClass {
  MinimalSlice,
  MinimalCatenoid,
  EmbeddedAnnulus,
  EntireGraph,
  ImmersedAnnulus,
  Sphere,
  Unduloid,
  Nodoid,
  Cylinder,
  Inadmissible,
};

inline constexpr std::string_view to_string(FamilyClass c) {
  switch (c) {
    case FamilyClass::MinimalSlice: return "MinimalSlice";
    case FamilyClass::MinimalCatenoid: return "MinimalCatenoid";
    case FamilyClass::EmbeddedAnnulus: return "EmbeddedAnnulus";
    case FamilyClass::EntireGraph: return "EntireGraph";
    case FamilyClass::ImmersedAnnulus: return "ImmersedAnnulus";
    case FamilyClass::Sphere: return "Sphere";
    case FamilyClass::Unduloid: return "Unduloid";
    case FamilyClass::Nodoid: return "Nodoid";
    case FamilyClass::Cylinder: return "Cylinder";
    case FamilyClass::Inadmissible: return "Inadmissible";
  }
  return "?";
}

/// Relative tolerance used to decide the boundary cases d = -2H,
/// d = -sqrt(4H^2 - 1), H = 1/2 and H = 0.
inline constexpr double kEqualityTol = 1e-12;

namespace detail {

inline bool nearly_equal(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) <= kEqualityTol * scale;
}

/// sinh(s)/s, equal to 1 at s = 0.
inline double sinhc(double s) {
  if (std::abs(s) < 1e-4) return 1.0 + s * s / 6.0;
  return std::sinh(s) / s;
}

/// cosh(a) - cosh(b) without cancellation.
inline double cosh_diff(double a, double b) {
  return 2.0 * std::sinh(0.5 * (a + b)) * std::sinh(0.5 * (a - b));
}

struct Normalized {
  double H;
  double d;
};

/// Applies the reflection t -> -t, which maps (H, d) to (-H, -d), so that
/// H >= 0; for H = 0 it leaves d >= 0. Snaps H and d onto the special
/// values when they agree to kEqualityTol.
inline Normalized normalize(double H, double d) {
  if (H < 0.0) {
    H = -H;
    d = -d;
  }
  if (H <= kEqualityTol) H = 0.0;
  if (H == 0.0) {
    d = std::abs(d);
    if (d <= kEqualityTol) d = 0.0;
    return {H, d};
  }
  if (nearly_equal(H, 0.5)) H = 0.5;
  if (nearly_equal(d, -2.0 * H)) d = -2.0 * H;
  if (H > 0.5) {
    const double s = std::sqrt(4.0 * H * H - 1.0);
    if (nearly_equal(d, -s)) d = -s;
  }
  return {H, d};
}

inline FamilyClass classify_normalized(double H, double d) {
  if (H == 0.0) return d == 0.0 ? FamilyClass::MinimalSlice : FamilyClass::MinimalCatenoid;
  if (H < 0.5) {
    if (d == -2.0 * H) return FamilyClass::EntireGraph;
    return d > -2.0 * H ? FamilyClass::EmbeddedAnnulus : FamilyClass::ImmersedAnnulus;
  }
  if (H == 0.5) {
    if (d >= 0.0) return FamilyClass::Inadmissible;
    if (d == -1.0) return FamilyClass::EntireGraph;
    return d > -1.0 ? FamilyClass::EmbeddedAnnulus : FamilyClass::ImmersedAnnulus;
  }
  const double s = std::sqrt(4.0 * H * H - 1.0);
  if (d == -s) return FamilyClass::Cylinder;
  if (d > -s) return FamilyClass::Inadmissible;
  if (d == -2.0 * H) return FamilyClass::Sphere;
  return d > -2.0 * H ? FamilyClass::Unduloid : FamilyClass::Nodoid;
}

}  // namespace detail

/// Family of the rotational H-surface with first-integral parameter d.
/// Total: negative H is reflected first, inadmissible pairs map to
/// FamilyClass::Inadmissible.
inline FamilyClass classify(double H, double d) {
  if (!std::isfinite(H) || !std::isfinite(d)) return FamilyClass::Inadmissible;
  const auto n = detail::normalize(H, d);
  return detail::classify_normalized(n.H, n.d);
}

/// An admissible, normalized (H, d) pair.
class ProfileParams {
 public:
  /// Throws DomainError naming the violated condition when (H, d) does not
  /// generate a rotational surface.
  static ProfileParams make(double H, double d) {
    if (!std::isfinite(H) || !std::isfinite(d))
      throw DomainError("ProfileParams: H and d must be finite");
    const auto n = detail::normalize(H, d);
    const FamilyClass c = detail::classify_normalized(n.H, n.d);
    if (c == FamilyClass::Inadmissible) {
      if (n.H == 0.5)
        throw DomainError("inadmissible (H, d): H = 1/2 requires d < 0");
      throw DomainError("inadmissible (H, d): H > 1/2 requires d <= -sqrt(4H^2 - 1)");
    }
    return ProfileParams(n.H, n.d, c);
  }

  double H() const { return H_; }
  double d() const { return d_; }
  FamilyClass family() const { return family_; }

 private:
  ProfileParams(double H, double d, FamilyClass c) : H_(H), d_(d), family_(c) {}
  double H_;
  double d_;
  FamilyClass family_;
};

struct DomainInfo {
  double rho1 = 0.0;
  std::optional<double> rho0;
  std::optional<double> rho2;
};

struct FG {
  double f = 0.0;
  double g = 0.0;
  double f_expanded = 0.0;
};

/// f and g straight from their definitions, plus the expanded quadratic in
/// cosh(rho) for cross-checking.
inline FG f_and_g(const ProfileParams& p, double rho) {
  if (!(rho >= 0.0)) throw DomainError("f_and_g: rho must be >= 0");
  const double H = p.H(), d = p.d();
  const double c = std::cosh(rho), s = std::sinh(rho);
  const double g = d + 2.0 * H * c;
  return {s * s - g * g, g, (1.0 - 4.0 * H * H) * c * c - 4.0 * d * H * c - 1.0 - d * d};
}

/// Closed-form roots and the integrand machinery for one (H, d) pair.
///
/// f is a quadratic in c = cosh(rho) with roots c1 <= c2 (c2 < 0 for
/// H < 1/2). Factoring f = A (c - c1)(c - c2) and writing the differences of
/// cosh values as sinh products avoids the cancellation that the defining
/// formula suffers near rho1 and rho2.
class RotationalProfile {
 public:
  explicit RotationalProfile(const ProfileParams& p) : params_(p) {
    H_ = p.H();
    d_ = p.d();
    A_ = 1.0 - 4.0 * H_ * H_;
    entire_ = (H_ > 0.0 && d_ == -2.0 * H_);
    const FamilyClass fam = p.family();
    if (H_ == 0.5) {
      c1_ = (1.0 + d_ * d_) / (-2.0 * d_);
    } else {
      const double disc = std::max(0.0, 1.0 - 4.0 * H_ * H_ + d_ * d_);
      const double S = std::sqrt(disc);
      // Both branches pick the cancellation-free form of the same root.
      c1_ = (d_ < 0.0) ? (1.0 + d_ * d_) / (S - 2.0 * d_ * H_) : (2.0 * d_ * H_ + S) / A_;
      if (H_ < 0.5)
        c2_ = (d_ > 0.0) ? -(1.0 + d_ * d_) / (2.0 * d_ * H_ + S) : (2.0 * d_ * H_ - S) / A_;
      else
        c2_ = (2.0 * d_ * H_ - S) / A_;
    }
    if (entire_) c1_ = 1.0;
    domain_.rho1 = (c1_ <= 1.0) ? 0.0 : std::acosh(c1_);
    if (H_ > 0.5) domain_.rho2 = std::acosh(std::max(1.0, c2_));
    if (fam == FamilyClass::Cylinder) domain_.rho2 = domain_.rho1;
    if (H_ > 0.0 && d_ < -2.0 * H_) domain_.rho0 = std::acosh(-d_ / (2.0 * H_));
    left_singular_ = !(entire_ || fam == FamilyClass::MinimalSlice);
  }

  const ProfileParams& params() const { return params_; }
  const DomainInfo& domain() const { return domain_; }
  double rho1() const { return domain_.rho1; }
  double upper() const {
    return domain_.rho2 ? *domain_.rho2 : std::numeric_limits<double>::infinity();
  }
  bool left_singular() const { return left_singular_; }
  bool right_singular() const { return domain_.rho2.has_value(); }

  double g(double rho) const { return d_ + 2.0 * H_ * std::cosh(rho); }

  /// f evaluated in factored form.
  double f(double rho) const {
    const double c = std::cosh(rho);
    const double left = detail::cosh_diff(rho, domain_.rho1);
    if (A_ == 0.0) return -2.0 * d_ * left;
    if (domain_.rho2) return -A_ * left * detail::cosh_diff(*domain_.rho2, rho);
    if (entire_) return left * (A_ * c + 1.0 + 4.0 * H_ * H_);
    return A_ * left * (c - c2_);
  }

  /// lambda'(rho) = g/sqrt(f); +-infinity where f vanishes and g does not,
  /// 0 where g vanishes.
  double lambda_prime(double rho) const {
    check_domain(rho);
    rho = clamp(rho);
    if (H_ == 0.0 && d_ == 0.0) return 0.0;
    if (entire_) {
      // 2H sqrt(cosh rho - 1) / sqrt((1-4H^2) cosh rho + 4H^2 + 1)
      const double num = 2.0 * H_ * std::sqrt(2.0) * std::sinh(0.5 * rho);
      if (num == 0.0) return 0.0;
      const double den2 = domain_.rho2 ? -A_ * detail::cosh_diff(*domain_.rho2, rho)
                                       : A_ * std::cosh(rho) + 1.0 + 4.0 * H_ * H_;
      if (den2 <= 0.0) return std::numeric_limits<double>::infinity();
      return num / std::sqrt(den2);
    }
    const double gv = g(rho);
    const double fv = f(rho);
    if (fv <= 0.0) {
      if (gv == 0.0) return 0.0;
      return std::copysign(std::numeric_limits<double>::infinity(), gv);
    }
    return gv / std::sqrt(fv);
  }

  /// Integral of lambda' over [a, b] within [rho1, upper], absolute error <= tol.
  double integral(double a, double b, double tol) const {
    check_domain(a);
    check_domain(b);
    a = clamp(a);
    b = clamp(b);
    if (a == b || (H_ == 0.0 && d_ == 0.0)) return 0.0;
    if (a > b) return -integral(b, a, tol);
    if (!right_singular()) return left_part(a, b, tol);
    const double mid = 0.5 * (domain_.rho1 + *domain_.rho2);
    if (b <= mid) return left_part(a, b, tol);
    if (a >= mid) return right_part(a, b, tol);
    return left_part(a, mid, 0.5 * tol) + right_part(mid, b, 0.5 * tol);
  }

  double lambda(double rho, double tol) const { return integral(domain_.rho1, rho, tol); }

 private:
  void check_domain(double rho) const {
    const double slack = 1e-12 * std::max(1.0, std::abs(rho));
    if (!(rho >= domain_.rho1 - slack) || !(rho <= upper() + slack))
      throw DomainError("rho = " + std::to_string(rho) + " outside the admissible interval [" +
                        std::to_string(domain_.rho1) + ", " + std::to_string(upper()) + "]");
  }
  double clamp(double rho) const { return std::clamp(rho, domain_.rho1, upper()); }

  // f = Q(r) (cosh r - c1) with Q regular at rho1.
  double q_left(double r) const {
    if (A_ == 0.0) return -2.0 * d_;
    if (domain_.rho2) return -A_ * detail::cosh_diff(*domain_.rho2, r);
    return A_ * (std::cosh(r) - c2_);
  }

  // Substitution r = rho1 + tau^2 removes the 1/sqrt singularity at rho1.
  double left_part(double a, double b, double tol) const {
    if (!left_singular_) {
      auto integrand = [this](double r) { return lambda_prime_regular(r); };
      return integrate(integrand, a, b, tol).value;
    }
    const double r1 = domain_.rho1;
    auto integrand = [this, r1](double tau) {
      const double t2 = tau * tau;
      const double r = r1 + t2;
      const double denom = q_left(r) * std::sinh(0.5 * (r + r1)) * detail::sinhc(0.5 * t2);
      return 2.0 * g(r) / std::sqrt(denom);
    };
    return integrate(integrand, std::sqrt(a - r1), std::sqrt(b - r1), tol).value;
  }

  // Substitution r = rho2 - tau^2 at the outer turning point.
  double right_part(double a, double b, double tol) const {
    const double r2 = *domain_.rho2;
    const double r1 = domain_.rho1;
    auto integrand = [this, r1, r2](double tau) {
      const double t2 = tau * tau;
      const double r = r2 - t2;
      // f = (-A) (cosh r - c1) (c2 - cosh r)
      const double left = entire_ ? 2.0 * std::sinh(0.5 * r) * std::sinh(0.5 * r)
                                  : detail::cosh_diff(r, r1);
      const double denom = -A_ * left * std::sinh(0.5 * (r2 + r)) * detail::sinhc(0.5 * t2);
      return 2.0 * g(r) / std::sqrt(denom);
    };
    return integrate(integrand, std::sqrt(r2 - b), std::sqrt(r2 - a), tol).value;
  }

  // Entire graphs and spheres away from rho2: lambda' is smooth at the axis.
  double lambda_prime_regular(double r) const {
    if (entire_) {
      const double num = 2.0 * H_ * std::sqrt(2.0) * std::sinh(0.5 * r);
      const double den2 = domain_.rho2 ? -A_ * detail::cosh_diff(*domain_.rho2, r)
                                       : A_ * std::cosh(r) + 1.0 + 4.0 * H_ * H_;
      return num / std::sqrt(den2);
    }
    return g(r) / std::sqrt(f(r));
  }

  ProfileParams params_;
  DomainInfo domain_;
  double H_ = 0.0, d_ = 0.0, A_ = 1.0;
  double c1_ = 1.0, c2_ = -1.0;
  bool entire_ = false;
  bool left_singular_ = true;
};

inline DomainInfo thresholds(const ProfileParams& p) { return RotationalProfile(p).domain(); }

inline double lambda_eval(const ProfileParams& p, double rho, double tol = 1e-10) {
  return RotationalProfile(p).lambda(rho, tol);
}

inline double lambda_prime(const ProfileParams& p, double rho) {
  return RotationalProfile(p).lambda_prime(rho);
}

/// Profile of the minimal surface M_d: integral of d/sqrt(sinh^2 r - d^2)
/// from asinh(d).
inline double minimal_lambda(double d, double rho, double tol = 1e-10) {
  if (!(d >= 0.0)) throw DomainError("minimal_lambda: d must be >= 0");
  if (rho < std::asinh(d)) throw DomainError("minimal_lambda: rho < asinh(d)");
  if (d == 0.0) return 0.0;
  return RotationalProfile(ProfileParams::make(0.0, d)).lambda(rho, tol);
}

struct ArclengthPoint {
  double rho = 0.0;
  double lambda = 0.0;
};

/// The catenoid profile parametrized by arclength s from the neck.
inline ArclengthPoint minimal_arclength(double d, double s, double tol = 1e-10) {
  if (!(d > 0.0)) throw DomainError("minimal_arclength: d must be > 0");
  if (!(s >= 0.0)) throw DomainError("minimal_arclength: s must be >= 0");
  const double rho = std::acosh(std::sqrt(1.0 + d * d) * std::cosh(s));
  const double k = 1.0 + d * d;
  auto integrand = [d, k](double t) {
    const double sh = std::sinh(t);
    return d / std::sqrt(d * d + k * sh * sh);
  };
  return {rho, integrate(integrand, 0.0, s, tol).value};
}

namespace detail {

// Truncation point T with 2 * int_T^inf (d / (sqrt(1+d^2) sinh t)) dt <= budget.
inline double catenoid_cutoff(double d, double budget) {
  const double coeff = 4.0 * d / std::sqrt(1.0 + d * d) / (1.0 - std::exp(-2.0));
  return std::max(1.0, std::log(coeff / budget));
}

}  // namespace detail

/// Vertical distance h(d) between the two asymptotic circles of the
/// catenoid M_d:  h(d) = 2 int_0^inf d / sqrt((1+d^2) cosh^2 t - 1) dt.
/// The tail beyond T is dropped with the bound 4d e^{-T} / (sqrt(1+d^2)(1-e^{-2T})).
inline double catenoid_height(double d, double tol = 1e-10) {
  if (!(d > 0.0)) throw DomainError("catenoid_height: d must be > 0");
  const double k = 1.0 + d * d;
  const double T = detail::catenoid_cutoff(d, 0.5 * tol);
  auto integrand = [d, k](double t) {
    const double sh = std::sinh(t);
    return d / std::sqrt(d * d + k * sh * sh);
  };
  // The integrand has a knee of width ~d at t = 0.
  const double knee = std::min(T, std::max(d, 1e-12));
  const double head = integrate(integrand, 0.0, knee, 0.125 * tol).value;
  const double body = integrate(integrand, knee, T, 0.125 * tol).value;
  return 2.0 * (head + body);
}

/// h'(d) = 2 int_0^inf sinh^2 t / ((1+d^2) cosh^2 t - 1)^{3/2} dt.
inline double catenoid_height_derivative(double d, double tol = 1e-10) {
  if (!(d > 0.0)) throw DomainError("catenoid_height_derivative: d must be > 0");
  const double k = 1.0 + d * d;
  // Tail integrand <= 1 / (k^{3/2} sinh t).
  const double coeff = 4.0 / std::pow(k, 1.5) / (1.0 - std::exp(-2.0));
  const double T = std::max(1.0, std::log(coeff / (0.5 * tol)));
  auto integrand = [d, k](double t) {
    const double sh = std::sinh(t);
    const double q = d * d + k * sh * sh;
    return sh * sh / (q * std::sqrt(q));
  };
  const double knee = std::min(T, std::max(d, 1e-12));
  const double head = integrate(integrand, 0.0, knee, 0.125 * tol).value;
  const double body = integrate(integrand, knee, T, 0.125 * tol).value;
  return 2.0 * (head + body);
}

struct SpecialRadii {
  double sphere_rho2 = 0.0;
  double cylinder_rho = 0.0;
  double unduloid_limit_rho = 0.0;
};

/// Closed-form radii for H > 1/2: the sphere's maximal distance to the axis,
/// the radius of the cylinder, and the common limit of rho1, rho2 of
/// unduloids as d -> -sqrt(4H^2 - 1).
inline SpecialRadii special_radii(double H) {
  if (!(H > 0.5)) throw DomainError("special_radii: requires H > 1/2");
  const double q = 4.0 * H * H;
  const double cyl = std::acosh(2.0 * H / std::sqrt(q - 1.0));
  return {std::acosh((q + 1.0) / (q - 1.0)), cyl, cyl};
}

struct ClassifiedSurface {
  FamilyClass family;
  double d;
};

/// Rotational H-surfaces with vanishing Abresch-Rosenberg differential.
/// For 0 < H < 1/2 there are two answers.
inline std::vector<ClassifiedSurface> classify_vanishing_Q(double H) {
  H = std::abs(H);
  if (H <= kEqualityTol) return {{FamilyClass::MinimalSlice, 0.0}};
  if (detail::nearly_equal(H, 0.5)) return {{FamilyClass::EntireGraph, -1.0}};
  if (H > 0.5) return {{FamilyClass::Sphere, -2.0 * H}};
  return {{FamilyClass::EntireGraph, -2.0 * H}, {FamilyClass::EmbeddedAnnulus, 2.0 * H}};
}

enum class Extension { None, ReflectAcrossSlice, PeriodicVertical };

inline constexpr std::string_view to_string(Extension e) {
  switch (e) {
    case Extension::None: return "None";
    case Extension::ReflectAcrossSlice: return "ReflectAcrossSlice";
    case Extension::PeriodicVertical: return "PeriodicVertical";
  }
  return "?";
}

struct ProfileSample {
  double rho = 0.0;
  double lambda = 0.0;
  double lambda_prime = 0.0;  ///< +-infinity at vertical tangents
};

/// Sampled generating curve. The fundamental piece starts at lambda(rho1) = 0.
struct ProfileCurve {
  ProfileParams params;
  DomainInfo domain;
  std::vector<ProfileSample> samples;
  Extension extension = Extension::None;
  std::optional<double> period;
};

struct ProfileOptions {
  double rho_max = 30.0;          ///< right end for unbounded profiles
  double cylinder_height = 1.0;   ///< sampled height (and period) of the cylinder
};

/// Samples the fundamental lambda-graph on [rho1, min(rho2, rho_max)].
/// Sample positions cluster quadratically toward vertical-tangent endpoints,
/// which matches uniform spacing in the substitution variable there.
inline ProfileCurve generate_profile(const ProfileParams& p, int n_samples, double tol = 1e-10,
                                     const ProfileOptions& opt = {}) {
  if (n_samples < 2) throw DomainError("generate_profile: need at least 2 samples");
  const RotationalProfile prof(p);
  ProfileCurve curve{p, prof.domain(), {}, Extension::None, std::nullopt};
  curve.samples.reserve(static_cast<std::size_t>(n_samples));
  const double inf = std::numeric_limits<double>::infinity();
  const auto fam = p.family();

  if (fam == FamilyClass::Cylinder) {
    for (int i = 0; i < n_samples; ++i) {
      const double s = static_cast<double>(i) / (n_samples - 1);
      curve.samples.push_back({prof.rho1(), s * opt.cylinder_height, inf});
    }
    curve.extension = Extension::PeriodicVertical;
    curve.period = opt.cylinder_height;
    return curve;
  }

  const double a = prof.rho1();
  const double b = prof.right_singular() ? prof.upper() : opt.rho_max;
  if (!(b > a)) throw DomainError("generate_profile: rho_max must exceed rho1");
  const bool left = prof.left_singular();
  const bool right = prof.right_singular();
  const double pi = std::numbers::pi;

  std::vector<double> rhos(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const double s = static_cast<double>(i) / (n_samples - 1);
    double w = s;
    if (left && right) w = 0.5 * (1.0 - std::cos(pi * s));
    else if (left) w = 1.0 - std::cos(0.5 * pi * s);
    else if (right) w = std::sin(0.5 * pi * s);
    rhos[static_cast<std::size_t>(i)] = a + (b - a) * w;
  }
  rhos.front() = a;
  rhos.back() = b;

  const double panel_tol = tol / (n_samples - 1);
  double lam = 0.0;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (i > 0) lam += prof.integral(rhos[i - 1], rhos[i], panel_tol);
    curve.samples.push_back({rhos[i], lam, prof.lambda_prime(rhos[i])});
  }

  switch (fam) {
    case FamilyClass::MinimalSlice:
    case FamilyClass::EntireGraph:
      curve.extension = Extension::None;
      break;
    case FamilyClass::Unduloid:
    case FamilyClass::Nodoid:
      curve.extension = Extension::PeriodicVertical;
      curve.period = 2.0 * (curve.samples.back().lambda - curve.samples.front().lambda);
      break;
    default:
      curve.extension = Extension::ReflectAcrossSlice;
      break;
  }
  return curve;
}

/// A point of the generating curve in the (rho, t) half plane.
struct CurvePoint {
  double rho = 0.0;
  double t = 0.0;
};

/// The generating curve with its symmetric extension applied:
///  - ReflectAcrossSlice reflects across the horizontal slice through the
///    vertical-tangent endpoint (the neck for annuli and catenoids, the
///    equator rho2 for the sphere);
///  - PeriodicVertical appends `periods` reflected/translated copies;
///  - None returns the samples unchanged.
inline std::vector<CurvePoint> extended_curve(const ProfileCurve& c, int periods = 1) {
  std::vector<CurvePoint> out;
  const auto& s = c.samples;
  if (s.empty()) return out;
  if (c.params.family() == FamilyClass::Cylinder) {
    for (int k = 0; k < periods; ++k)
      for (std::size_t i = (k == 0 ? 0 : 1); i < s.size(); ++i)
        out.push_back({s[i].rho, s[i].lambda + k * *c.period});
    return out;
  }
  switch (c.extension) {
    case Extension::None:
      for (const auto& p : s) out.push_back({p.rho, p.lambda});
      break;
    case Extension::ReflectAcrossSlice: {
      const bool at_end = c.params.family() == FamilyClass::Sphere;
      if (at_end) {
        const double level = s.back().lambda;
        for (const auto& p : s) out.push_back({p.rho, p.lambda});
        for (std::size_t i = s.size() - 1; i-- > 0;) out.push_back({s[i].rho, 2.0 * level - s[i].lambda});
      } else {
        const double level = s.front().lambda;
        for (std::size_t i = s.size(); i-- > 1;) out.push_back({s[i].rho, 2.0 * level - s[i].lambda});
        for (const auto& p : s) out.push_back({p.rho, p.lambda});
      }
      break;
    }
    case Extension::PeriodicVertical: {
      const double top = s.back().lambda;
      for (int k = 0; k < periods; ++k) {
        const double shift = k * *c.period;
        for (std::size_t i = (k == 0 ? 0 : 1); i < s.size(); ++i)
          out.push_back({s[i].rho, s[i].lambda + shift});
        for (std::size_t i = s.size() - 1; i-- > 0;)
          out.push_back({s[i].rho, 2.0 * top - s[i].lambda + shift});
      }
      break;
    }
  }
  return out;
}

}  // namespace cmc
