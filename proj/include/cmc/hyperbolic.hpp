#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

/// Points of H^2 (Poincare disk and upper halfplane) and of H^2 x R,
/// together with the few isometries used elsewhere in the library.
namespace cmc {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DiskPoint {
 public:
  DiskPoint() = default;
  DiskPoint(double x, double y) : x_(x), y_(y) {
    if (!std::isfinite(x) || !std::isfinite(y) || x * x + y * y >= 1.0)
      throw std::invalid_argument("DiskPoint outside the open unit disk: (" +
                                  std::to_string(x) + ", " + std::to_string(y) + ")");
  }

  double x() const { return x_; }
  double y() const { return y_; }
  double norm2() const { return x_ * x_ + y_ * y_; }
  std::complex<double> z() const { return {x_, y_}; }

  friend bool operator==(const DiskPoint&, const DiskPoint&) = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
};

class HalfPlanePoint {
 public:
  HalfPlanePoint() = default;
  HalfPlanePoint(double x, double y) : x_(x), y_(y) {
    if (!std::isfinite(x) || !std::isfinite(y) || !(y > 0.0))
      throw std::invalid_argument("HalfPlanePoint requires y > 0");
  }

  double x() const { return x_; }
  double y() const { return y_; }

 private:
  double x_ = 0.0;
  double y_ = 1.0;
};

/// A point (x, y, t) of H^2 x R with the base in the disk model.
struct SpacePoint {
  DiskPoint base;
  double t = 0.0;
};

/// Geodesic polar coordinates about the disk origin.
struct PolarCoords {
  double rho = 0.0;
  double theta = 0.0;
};

/// Density of the disk metric, F = 2/(1 - |p|^2).
inline double conformal_factor(const DiskPoint& p) { return 2.0 / (1.0 - p.norm2()); }

/// Same factor for raw coordinates; callers guarantee x^2 + y^2 < 1.
inline double disk_conformal_factor(double x, double y) { return 2.0 / (1.0 - (x * x + y * y)); }

inline DiskPoint rho_to_disk(double rho, double theta) {
  if (!(rho >= 0.0)) throw DomainError("rho_to_disk: rho must be >= 0");
  const double r = std::tanh(0.5 * rho);
  return {r * std::cos(theta), r * std::sin(theta)};
}

/// theta is reported as 0 at the origin.
inline PolarCoords disk_to_rho(const DiskPoint& p) {
  const double r = std::sqrt(p.norm2());
  if (r == 0.0) return {0.0, 0.0};
  return {2.0 * std::atanh(r), std::atan2(p.y(), p.x())};
}

/// d(p, q) = 2 asinh(|p - q| / sqrt((1-|p|^2)(1-|q|^2))); stable for nearby points.
inline double geodesic_distance(const DiskPoint& p, const DiskPoint& q) {
  const double dx = p.x() - q.x();
  const double dy = p.y() - q.y();
  const double chord = std::hypot(dx, dy);
  return 2.0 * std::asinh(chord / std::sqrt((1.0 - p.norm2()) * (1.0 - q.norm2())));
}

inline double geodesic_distance(const HalfPlanePoint& p, const HalfPlanePoint& q) {
  const double chord = std::hypot(p.x() - q.x(), p.y() - q.y());
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(p.y() * q.y())));
}

/// Hyperbolic translation along Gamma = (-1, 1). Positive s moves points
/// toward the ideal point -1: z -> (z - a)/(1 - a z), a = tanh(s/2).
/// Acts trivially on the height.
inline DiskPoint translate_along_gamma(const DiskPoint& p, double s) {
  const double a = std::tanh(0.5 * s);
  const std::complex<double> z = p.z();
  const std::complex<double> w = (z - a) / (1.0 - a * z);
  // Round-off can push |w| to 1 for points very close to the ideal boundary.
  return {w.real(), w.imag()};
}

inline SpacePoint translate_along_gamma(const SpacePoint& p, double s) {
  return {translate_along_gamma(p.base, s), p.t};
}

/// Cayley map z -> i(1+z)/(1-z); the disk origin goes to (0, 1).
inline HalfPlanePoint disk_to_halfplane(const DiskPoint& p) {
  const std::complex<double> i{0.0, 1.0};
  const std::complex<double> z = p.z();
  const std::complex<double> w = i * (1.0 + z) / (1.0 - z);
  return {w.real(), w.imag()};
}

inline DiskPoint halfplane_to_disk(const HalfPlanePoint& p) {
  const std::complex<double> i{0.0, 1.0};
  const std::complex<double> w{p.x(), p.y()};
  const std::complex<double> z = (w - i) / (w + i);
  return {z.real(), z.imag()};
}

/// Euclidean circle traced in the disk model by a hyperbolic circle.
struct EuclideanCircle {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
};

inline EuclideanCircle geodesic_circle_in_disk(const DiskPoint& center, double radius) {
  if (!(radius > 0.0)) throw DomainError("geodesic circle radius must be positive");
  const PolarCoords pc = disk_to_rho(center);
  const double ux = std::cos(pc.theta);
  const double uy = std::sin(pc.theta);
  // Endpoints of the diameter lying on the line through the origin and the center.
  const double a = std::tanh(0.5 * (pc.rho - radius));
  const double b = std::tanh(0.5 * (pc.rho + radius));
  const double mid = 0.5 * (a + b);
  return {mid * ux, mid * uy, 0.5 * (b - a)};
}

inline EuclideanCircle geodesic_circle_in_halfplane(const HalfPlanePoint& center, double radius) {
  if (!(radius > 0.0)) throw DomainError("geodesic circle radius must be positive");
  return {center.x(), center.y() * std::cosh(radius), center.y() * std::sinh(radius)};
}

/// A complete geodesic of the disk model, either a diameter or an arc of a
/// circle orthogonal to the unit circle.
class Geodesic {
 public:
  /// The geodesic through two distinct disk points.
  static Geodesic through(const DiskPoint& p, const DiskPoint& q) {
    Geodesic g;
    const double cross = p.x() * q.y() - p.y() * q.x();
    const double scale = std::max(1.0, std::hypot(p.x() - q.x(), p.y() - q.y()));
    if (std::hypot(p.x() - q.x(), p.y() - q.y()) == 0.0)
      throw DomainError("Geodesic::through needs two distinct points");
    if (std::abs(cross) <= 1e-14 * scale) {
      const double px = (p.norm2() > q.norm2()) ? p.x() : q.x();
      const double py = (p.norm2() > q.norm2()) ? p.y() : q.y();
      const double n = std::hypot(px, py);
      g.diameter_ = true;
      g.dx_ = px / n;
      g.dy_ = py / n;
      return g;
    }
    // Center c of the orthogonal circle solves |c - p|^2 = |c|^2 - 1 for p and q.
    const double a11 = 2.0 * p.x(), a12 = 2.0 * p.y(), b1 = p.norm2() + 1.0;
    const double a21 = 2.0 * q.x(), a22 = 2.0 * q.y(), b2 = q.norm2() + 1.0;
    const double det = a11 * a22 - a12 * a21;
    g.cx_ = (b1 * a22 - a12 * b2) / det;
    g.cy_ = (a11 * b2 - b1 * a21) / det;
    g.r2_ = g.cx_ * g.cx_ + g.cy_ * g.cy_ - 1.0;
    return g;
  }

  /// The diameter making angle `angle` with the x axis.
  static Geodesic diameter(double angle) {
    Geodesic g;
    g.diameter_ = true;
    g.dx_ = std::cos(angle);
    g.dy_ = std::sin(angle);
    return g;
  }

  bool is_diameter() const { return diameter_; }

  /// Hyperbolic reflection across this geodesic (raw coordinates).
  void reflect(double x, double y, double& rx, double& ry) const {
    if (diameter_) {
      const double proj = x * dx_ + y * dy_;
      rx = 2.0 * proj * dx_ - x;
      ry = 2.0 * proj * dy_ - y;
      return;
    }
    const double vx = x - cx_, vy = y - cy_;
    const double s = r2_ / (vx * vx + vy * vy);
    rx = cx_ + s * vx;
    ry = cy_ + s * vy;
  }

  DiskPoint reflect(const DiskPoint& p) const {
    double rx = 0, ry = 0;
    reflect(p.x(), p.y(), rx, ry);
    return {rx, ry};
  }

 private:
  bool diameter_ = false;
  double dx_ = 1.0, dy_ = 0.0;
  double cx_ = 0.0, cy_ = 0.0, r2_ = 0.0;
};

}  // namespace cmc
