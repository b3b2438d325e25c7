#pragma once

// Dirichlet problem for vertical graphs of constant mean curvature over a
// domain of the hyperbolic plane, with zero boundary values. In a conformal
// chart with metric F^2 |dx|^2 the equation reads
//
//     div_E( grad u / W ) = 2 H F^2,     W = sqrt(1 + |grad u|^2 / F^2),
//
// which is solved on a Cartesian grid by Newton's method, following the path
// t -> 2 H t F^2 from the trivial solution at t = 0.

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cmc/hyperbolic.hpp"
#include "cmc/quadrature.hpp"

namespace cmc {

/// Conformal chart: the Poincare disk (F = 2/(1-|z|^2)) or the upper
/// halfplane (F = 1/y).
enum class Model { Disk, HalfPlane };

inline constexpr std::string_view to_string(Model m) {
  return m == Model::Disk ? "disk" : "halfplane";
}

inline double model_factor(Model m, double x, double y) {
  return m == Model::Disk ? 2.0 / (1.0 - (x * x + y * y)) : 1.0 / y;
}

/// Gradient of log F.
inline std::array<double, 2> model_log_factor_gradient(Model m, double x, double y) {
  if (m == Model::Disk) {
    const double s = 2.0 / (1.0 - (x * x + y * y));
    return {s * x, s * y};
  }
  return {0.0, -1.0 / y};
}

inline bool model_contains(Model m, double x, double y) {
  return m == Model::Disk ? x * x + y * y < 1.0 : y > 0.0;
}

struct Box {
  double xmin, xmax, ymin, ymax;
};

enum class DomainKind { GeodesicDisk, LevelSet };

/// A bounded domain in one of the two charts, together with the grid
/// resolution used to discretize it. Level-set domains are negative inside
/// and must be star-shaped about `star_center` (used to parametrize the
/// boundary by angle).
class DomainSpec {
 public:
  using LevelSet = std::function<double(double, double)>;

  static DomainSpec geodesic_disk(const DiskPoint& center, double radius, int grid_n) {
    const EuclideanCircle c = geodesic_circle_in_disk(center, radius);
    if (!(std::hypot(c.cx, c.cy) + c.radius < 1.0))
      throw DomainError("geodesic disk does not fit in the disk model at double precision");
    DomainSpec s = circle_spec(c, Model::Disk, grid_n);
    s.center_ = {center.x(), center.y()};
    s.radius_ = radius;
    return s;
  }

  static DomainSpec geodesic_disk(const HalfPlanePoint& center, double radius, int grid_n) {
    const EuclideanCircle c = geodesic_circle_in_halfplane(center, radius);
    if (!(c.cy - c.radius > 0.0))
      throw DomainError("geodesic disk does not fit in the halfplane at double precision");
    DomainSpec s = circle_spec(c, Model::HalfPlane, grid_n);
    s.center_ = {center.x(), center.y()};
    s.radius_ = radius;
    return s;
  }

  /// `box` must enclose the domain with phi > 0 on its edges; it is widened
  /// to a square about its center.
  static DomainSpec level_set(LevelSet phi, Box box, int grid_n, Model model = Model::Disk,
                              std::optional<std::array<double, 2>> star_center = std::nullopt) {
    if (!phi) throw DomainError("level set function is empty");
    if (!(box.xmax > box.xmin && box.ymax > box.ymin)) throw DomainError("empty bounding box");
    DomainSpec s;
    s.kind_ = DomainKind::LevelSet;
    s.model_ = model;
    s.phi_ = std::move(phi);
    s.box_ = square(box);
    s.star_ = star_center.value_or(std::array{0.5 * (box.xmin + box.xmax), 0.5 * (box.ymin + box.ymax)});
    s.set_grid(grid_n);
    if (!(s.phi(s.star_[0], s.star_[1]) < 0.0)) throw DomainError("star center lies outside the domain");
    return s;
  }

  DomainSpec with_grid(int grid_n) const {
    DomainSpec s = *this;
    s.set_grid(grid_n);
    return s;
  }

  DomainKind kind() const { return kind_; }
  Model model() const { return model_; }
  int grid_n() const { return grid_n_; }
  const Box& box() const { return box_; }
  double grid_h() const { return (box_.xmax - box_.xmin) / grid_n_; }
  const std::array<double, 2>& star_center() const { return star_; }

  /// Geodesic center and radius; only for GeodesicDisk domains.
  const std::array<double, 2>& geodesic_center() const { return center_; }
  double geodesic_radius() const { return radius_; }
  const EuclideanCircle& euclidean_circle() const { return circle_; }

  double phi(double x, double y) const {
    if (kind_ == DomainKind::GeodesicDisk) return std::hypot(x - circle_.cx, y - circle_.cy) - circle_.radius;
    return phi_(x, y);
  }

  std::array<double, 2> grad_phi(double x, double y) const {
    if (kind_ == DomainKind::GeodesicDisk) {
      const double dx = x - circle_.cx, dy = y - circle_.cy, r = std::hypot(dx, dy);
      return {dx / r, dy / r};
    }
    const double e = 1e-6 * (box_.xmax - box_.xmin);
    return {(phi_(x + e, y) - phi_(x - e, y)) / (2 * e), (phi_(x, y + e) - phi_(x, y - e)) / (2 * e)};
  }

  /// Distance from the star center to the boundary along direction alpha.
  double boundary_radius(double alpha) const {
    if (kind_ == DomainKind::GeodesicDisk) return circle_.radius;  // star center is the circle's center
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double diag = std::hypot(box_.xmax - box_.xmin, box_.ymax - box_.ymin);
    const double step = diag / 1024.0;
    auto f = [&](double r) { return phi_(star_[0] + r * ca, star_[1] + r * sa); };
    double lo = 0.0, hi = step;
    while (f(hi) < 0.0) {
      lo = hi;
      hi += step;
      if (hi > diag) throw DomainError("no boundary crossing along a ray from the star center");
    }
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  std::array<double, 2> boundary_point(double alpha) const {
    const double r = boundary_radius(alpha);
    return {star_[0] + r * std::cos(alpha), star_[1] + r * std::sin(alpha)};
  }

  std::string describe() const {
    std::ostringstream o;
    o.precision(17);
    if (kind_ == DomainKind::GeodesicDisk)
      o << "geodesic disk (" << to_string(model_) << ") center (" << center_[0] << ", " << center_[1]
        << ") radius " << radius_;
    else
      o << "level set (" << to_string(model_) << ") box [" << box_.xmin << ", " << box_.xmax << "] x ["
        << box_.ymin << ", " << box_.ymax << "]";
    o << " grid_n " << grid_n_;
    return o.str();
  }

 private:
  static Box square(Box b) {
    const double half = 0.5 * std::max(b.xmax - b.xmin, b.ymax - b.ymin);
    const double cx = 0.5 * (b.xmin + b.xmax), cy = 0.5 * (b.ymin + b.ymax);
    return {cx - half, cx + half, cy - half, cy + half};
  }

  static DomainSpec circle_spec(const EuclideanCircle& c, Model m, int grid_n) {
    DomainSpec s;
    s.kind_ = DomainKind::GeodesicDisk;
    s.model_ = m;
    s.circle_ = c;
    s.box_ = {c.cx - c.radius, c.cx + c.radius, c.cy - c.radius, c.cy + c.radius};
    s.star_ = {c.cx, c.cy};
    s.set_grid(grid_n);
    return s;
  }

  void set_grid(int n) {
    if (n < 4) throw DomainError("grid_n must be at least 4");
    grid_n_ = n;
  }

  DomainKind kind_ = DomainKind::LevelSet;
  Model model_ = Model::Disk;
  LevelSet phi_;
  EuclideanCircle circle_;
  Box box_{};
  std::array<double, 2> star_{};
  std::array<double, 2> center_{};
  double radius_ = 0.0;
  int grid_n_ = 0;
};

/// Minimum geodesic curvature of the boundary over n_probe equally spaced
/// angles. The boundary is parametrized by angle about the star center and
/// differentiated with 5-point stencils; the hyperbolic value follows from
/// the conformal change k_g = (k_E + d_nu log F) / F, nu the outward normal.
inline double boundary_curvature_min(const DomainSpec& dom, int n_probe = 256) {
  if (n_probe < 1) throw DomainError("n_probe must be positive");
  const double da = 1e-3;
  const double scale = dom.box().xmax - dom.box().xmin;
  double kmin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_probe; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n_probe;
    std::array<std::array<double, 2>, 5> p;
    for (int m = 0; m < 5; ++m) p[m] = dom.boundary_point(a + (m - 2) * da);
    const auto& c = p[2];
    const auto g = dom.grad_phi(c[0], c[1]);
    if (!(std::hypot(g[0], g[1]) > 1e-8)) throw DomainError("level set gradient vanishes on the boundary");
    double d1[2], d2[2];
    for (int q = 0; q < 2; ++q) {
      d1[q] = (-p[4][q] + 8.0 * p[3][q] - 8.0 * p[1][q] + p[0][q]) / (12.0 * da);
      d2[q] = (-p[4][q] + 16.0 * p[3][q] - 30.0 * p[2][q] + 16.0 * p[1][q] - p[0][q]) / (12.0 * da * da);
    }
    const double speed = std::hypot(d1[0], d1[1]);
    if (!(speed > 1e-12 * scale)) throw DomainError("degenerate boundary parametrization");
    const double kE = (d1[0] * d2[1] - d1[1] * d2[0]) / (speed * speed * speed);
    const double nu[2] = {d1[1] / speed, -d1[0] / speed};
    const auto gl = model_log_factor_gradient(dom.model(), c[0], c[1]);
    const double kg = (kE + gl[0] * nu[0] + gl[1] * nu[1]) / model_factor(dom.model(), c[0], c[1]);
    kmin = std::min(kmin, kg);
  }
  return kmin;
}

struct ContinuationStep {
  double t;
  int newton_iters;
  double residual;
};

/// Continuation could not reach t = 1; carries the steps that did succeed.
class ContinuationError : public ConvergenceError {
 public:
  ContinuationError(const std::string& what, double achieved, std::vector<ContinuationStep> trace)
      : ConvergenceError(what, achieved), trace_(std::move(trace)) {}
  const std::vector<ContinuationStep>& trace() const { return trace_; }

 private:
  std::vector<ContinuationStep> trace_;
};

struct SolveOptions {
  double tol = 1e-8;
  double initial_step = 0.25;
  double min_step = 1e-3;
  int max_newton = 30;
  /// Permit |H| > 1/2, outside the range where existence is known.
  bool allow_large_H = false;
};

namespace detail {

// Sparse linear combination of unknowns.
struct Form {
  std::vector<std::pair<int, double>> terms;

  void add(int k, double c) { terms.emplace_back(k, c); }
  void add(const Form& f, double s) {
    for (const auto& [k, c] : f.terms) terms.emplace_back(k, s * c);
  }
  double eval(const std::vector<double>& u) const {
    double s = 0.0;
    for (const auto& [k, c] : terms) s += c * u[k];
    return s;
  }
};

// Flux through one cell face: D is the derivative across the face, T the
// derivative along it, F the conformal factor at the face midpoint.
struct Face {
  Form D, T;
  double F;
};

enum Dir { E = 0, W = 1, N = 2, S = 3 };

struct Node {
  int i, j;
  double x, y, F;
  std::array<double, 4> arm;  // distance to neighbor or boundary
  std::array<int, 4> nb;      // neighbor unknown, or -1 for a boundary point
  std::array<int, 4> face;
  bool regular() const { return nb[0] >= 0 && nb[1] >= 0 && nb[2] >= 0 && nb[3] >= 0; }
};

/// Shortley-Weller discretization of the divergence-form operator.
class Discretization {
 public:
  explicit Discretization(const DomainSpec& dom) : dom_(dom) {
    const Box& b = dom.box();
    n_ = dom.grid_n();
    h_ = dom.grid_h();
    x0_ = b.xmin;
    y0_ = b.ymin;
    const int m = n_ + 1;
    index_.assign(static_cast<std::size_t>(m) * m, -1);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) {
        const double px = x(i), py = y(j);
        const double ph = dom.phi(px, py);
        if (!(ph < 0.0)) continue;
        if (i == 0 || j == 0 || i == n_ || j == n_) {
          // Circle boxes put nodes on the boundary; rounding may land them inside.
          if (ph > -1e-9 * h_) continue;
          throw DomainError("domain touches the edge of its bounding box");
        }
        if (!model_contains(dom.model(), px, py)) throw DomainError("domain leaves the model");
        index_[flat(i, j)] = static_cast<int>(nodes_.size());
        nodes_.push_back({i, j, px, py, model_factor(dom.model(), px, py), {}, {}, {}});
      }
    if (nodes_.empty()) throw DomainError("no grid node lies inside the domain");

    static constexpr int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (auto& p : nodes_)
      for (int d = 0; d < 4; ++d) {
        const int q = index_[flat(p.i + di[d], p.j + dj[d])];
        p.nb[d] = q;
        p.arm[d] = q >= 0 ? h_ : crossing(p.x, p.y, di[d], dj[d]);
      }

    dx_.resize(nodes_.size());
    dy_.resize(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      dx_[k] = nodal_derivative(static_cast<int>(k), E, W);
      dy_[k] = nodal_derivative(static_cast<int>(k), N, S);
    }

    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      Node& p = nodes_[k];
      for (int d = 0; d < 4; ++d) {
        if (d == W || d == S) {
          if (p.nb[d] >= 0) continue;  // filled in from the neighbor
        }
        p.face[d] = static_cast<int>(faces_.size());
        faces_.push_back(make_face(static_cast<int>(k), static_cast<Dir>(d)));
        if (p.nb[d] >= 0) nodes_[p.nb[d]].face[d == E ? W : S] = p.face[d];
      }
    }
  }

  const DomainSpec& domain() const { return dom_; }
  int n() const { return n_; }
  double h() const { return h_; }
  double x(int i) const { return x0_ + i * h_; }
  double y(int j) const { return y0_ + j * h_; }
  std::size_t flat(int i, int j) const { return static_cast<std::size_t>(j) * (n_ + 1) + i; }
  int index(int i, int j) const { return index_[flat(i, j)]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Face>& faces() const { return faces_; }
  std::size_t size() const { return nodes_.size(); }

  struct FaceState {
    double q, cD, cT;
  };

  FaceState face_state(const Face& f, const std::vector<double>& u) const {
    const double D = f.D.eval(u), T = f.T.eval(u);
    const double F2 = f.F * f.F;
    const double a = 1.0 / std::sqrt(1.0 + (D * D + T * T) / F2);
    const double a3 = a * a * a / F2;
    return {a * D, a - a3 * D * D, -a3 * D * T};
  }

  std::vector<double> face_fluxes(const std::vector<double>& u) const {
    std::vector<double> q(faces_.size());
    for (std::size_t f = 0; f < faces_.size(); ++f) q[f] = face_state(faces_[f], u).q;
    return q;
  }

  /// Residual of the discrete operator at parameter t (right side 2 H t F^2).
  void residual(const std::vector<double>& u, double Ht, std::vector<double>& r) const {
    const auto q = face_fluxes(u);
    r.resize(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k) r[k] = row(nodes_[k], q, Ht);
  }

  double row(const Node& p, const std::vector<double>& q, double Ht) const {
    const double mx = 0.5 * (p.arm[E] + p.arm[W]), my = 0.5 * (p.arm[N] + p.arm[S]);
    return (q[p.face[E]] - q[p.face[W]]) / mx + (q[p.face[N]] - q[p.face[S]]) / my - 2.0 * Ht * p.F * p.F;
  }

  Eigen::SparseMatrix<double> jacobian(const std::vector<double>& u) const {
    std::vector<FaceState> st(faces_.size());
    for (std::size_t f = 0; f < faces_.size(); ++f) st[f] = face_state(faces_[f], u);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(nodes_.size() * 40);
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      const Node& p = nodes_[k];
      const double mx = 0.5 * (p.arm[E] + p.arm[W]), my = 0.5 * (p.arm[N] + p.arm[S]);
      const double w[4] = {1.0 / mx, -1.0 / mx, 1.0 / my, -1.0 / my};
      for (int d = 0; d < 4; ++d) {
        const Face& f = faces_[p.face[d]];
        const FaceState& s = st[p.face[d]];
        for (const auto& [c, v] : f.D.terms) trip.emplace_back(static_cast<int>(k), c, w[d] * s.cD * v);
        for (const auto& [c, v] : f.T.terms) trip.emplace_back(static_cast<int>(k), c, w[d] * s.cT * v);
      }
    }
    const auto n = static_cast<Eigen::Index>(nodes_.size());
    Eigen::SparseMatrix<double> J(n, n);
    J.setFromTriplets(trip.begin(), trip.end());
    J.makeCompressed();
    return J;
  }

 private:
  // Distance from (x, y) to the boundary along the grid line, by bisection.
  double crossing(double x, double y, int di, int dj) const {
    double lo = 0.0, hi = h_;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (dom_.phi(x + di * mid, y + dj * mid) < 0.0 ? lo : hi) = mid;
    }
    // Keeps the stencil finite for nodes sitting on the boundary to rounding.
    return std::max(0.5 * (lo + hi), 1e-12 * h_);
  }

  // Three-point derivative with unequal arms a (plus side) and b (minus side).
  Form nodal_derivative(int k, Dir plus, Dir minus) const {
    const Node& p = nodes_[k];
    const double a = p.arm[plus], b = p.arm[minus];
    Form f;
    if (p.nb[plus] >= 0) f.add(p.nb[plus], b / (a * (a + b)));
    if (p.nb[minus] >= 0) f.add(p.nb[minus], -a / (b * (a + b)));
    f.add(k, (a - b) / (a * b));
    return f;
  }

  Face make_face(int k, Dir d) const {
    const Node& p = nodes_[k];
    const bool xface = d == E || d == W;
    const std::vector<Form>& tang = xface ? dy_ : dx_;
    const Dir opposite = d == E ? W : d == W ? E : d == N ? S : N;
    const double sgn = (d == E || d == N) ? 1.0 : -1.0;
    const double a = p.arm[d];
    Face f;
    const double mx = p.x + (xface ? sgn * 0.5 * a : 0.0);
    const double my = p.y + (xface ? 0.0 : sgn * 0.5 * a);
    f.F = model_factor(dom_.model(), mx, my);
    const int q = p.nb[d];
    if (q >= 0) {
      // Interior face, always built from the node on its minus side.
      f.D.add(q, 1.0 / a);
      f.D.add(k, -1.0 / a);
      f.T.add(tang[k], 0.5);
      f.T.add(tang[q], 0.5);
      return f;
    }
    // Face toward a boundary point, where u = 0.
    f.D.add(k, -sgn / a);
    const int back = p.nb[opposite];
    if (back >= 0) {
      const double s = 0.5 * a / p.arm[opposite];
      f.T.add(tang[k], 1.0 + s);
      f.T.add(tang[back], -s);
    } else {
      f.T.add(tang[k], 1.0);
    }
    return f;
  }

  DomainSpec dom_;
  int n_ = 0;
  double h_ = 0.0, x0_ = 0.0, y0_ = 0.0;
  std::vector<int> index_;
  std::vector<Node> nodes_;
  std::vector<Form> dx_, dy_;
  std::vector<Face> faces_;
};

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace detail

/// Grid function on the (grid_n + 1)^2 nodes of the domain's bounding box;
/// zero off the interior nodes.
struct GraphSolution {
  DomainSpec domain;
  double H = 0.0;
  double tolerance = 0.0;
  std::vector<double> u;
  std::vector<char> interior;
  double residual_norm = 0.0;
  std::vector<ContinuationStep> continuation_trace;
  std::vector<std::string> warnings;

  int n() const { return domain.grid_n(); }
  double h() const { return domain.grid_h(); }
  double x(int i) const { return domain.box().xmin + i * h(); }
  double y(int j) const { return domain.box().ymin + j * h(); }
  std::size_t flat(int i, int j) const { return static_cast<std::size_t>(j) * (n() + 1) + i; }
  bool is_interior(int i, int j) const { return interior[flat(i, j)] != 0; }
  double at(int i, int j) const { return u[flat(i, j)]; }

  /// Bilinear interpolation; empty unless all four cell corners are interior.
  std::optional<double> interpolate(double px, double py) const {
    const double fx = (px - domain.box().xmin) / h(), fy = (py - domain.box().ymin) / h();
    const int i = static_cast<int>(std::floor(fx)), j = static_cast<int>(std::floor(fy));
    if (i < 0 || j < 0 || i >= n() || j >= n()) return std::nullopt;
    if (!is_interior(i, j) || !is_interior(i + 1, j) || !is_interior(i, j + 1) || !is_interior(i + 1, j + 1))
      return std::nullopt;
    const double s = fx - i, t = fy - j;
    return (1 - s) * (1 - t) * at(i, j) + s * (1 - t) * at(i + 1, j) + (1 - s) * t * at(i, j + 1) +
           s * t * at(i + 1, j + 1);
  }

  /// Tensor-product cubic interpolation on the 4 x 4 nodes around the
  /// point; empty unless all sixteen are interior.
  std::optional<double> interpolate_cubic(double px, double py) const {
    const double fx = (px - domain.box().xmin) / h(), fy = (py - domain.box().ymin) / h();
    const int i = static_cast<int>(std::floor(fx)), j = static_cast<int>(std::floor(fy));
    if (i < 1 || j < 1 || i + 2 > n() || j + 2 > n()) return std::nullopt;
    for (int b = -1; b <= 2; ++b)
      for (int a = -1; a <= 2; ++a)
        if (!is_interior(i + a, j + b)) return std::nullopt;
    auto weights = [](double s, double w[4]) {
      w[0] = -s * (s - 1) * (s - 2) / 6;
      w[1] = (s + 1) * (s - 1) * (s - 2) / 2;
      w[2] = -(s + 1) * s * (s - 2) / 2;
      w[3] = (s + 1) * s * (s - 1) / 6;
    };
    double wx[4], wy[4];
    weights(fx - i, wx);
    weights(fy - j, wy);
    double v = 0.0;
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a) v += wx[a] * wy[b] * at(i + a - 1, j + b - 1);
    return v;
  }

  double max_abs_u() const { return detail::max_abs(u); }
  std::size_t interior_count() const { return static_cast<std::size_t>(std::count(interior.begin(), interior.end(), 1)); }
};

namespace detail {

struct NewtonOutcome {
  bool converged;
  int iters;
  double residual;
};

inline NewtonOutcome newton(const Discretization& disc, std::vector<double>& u, double Ht,
                            const SolveOptions& opt, Eigen::SparseLU<Eigen::SparseMatrix<double>>& lu,
                            bool& analyzed) {
  std::vector<double> r, trial, rt;
  disc.residual(u, Ht, r);
  double rinf = max_abs(r);
  auto norm2 = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  double r2 = norm2(r);
  for (int it = 0; it < opt.max_newton; ++it) {
    if (rinf <= opt.tol) return {true, it, rinf};
    const auto J = disc.jacobian(u);
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) return {false, it, rinf};
    Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(r.size()));
    const Eigen::VectorXd delta = lu.solve(-rv);
    if (lu.info() != Eigen::Success || !delta.allFinite()) return {false, it, rinf};
    // Backtracking on the Euclidean norm of the residual.
    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= 1.0 / 64) {
      trial = u;
      for (std::size_t k = 0; k < u.size(); ++k) trial[k] += alpha * delta[static_cast<Eigen::Index>(k)];
      disc.residual(trial, Ht, rt);
      const double t2 = norm2(rt);
      if (std::isfinite(t2) && t2 <= (1.0 - 1e-4 * alpha) * r2) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) return {max_abs(r) <= opt.tol, it + 1, rinf};
    u.swap(trial);
    r.swap(rt);
    rinf = max_abs(r);
    r2 = norm2(r);
  }
  return {rinf <= opt.tol, opt.max_newton, rinf};
}

}  // namespace detail

/// Solves div_E(grad u / W) = 2 H F^2 in the domain with u = 0 on its
/// boundary. Continuation in t from the trivial solution at t = 0, with the
/// step halved on Newton failure down to opt.min_step.
inline GraphSolution solve_dirichlet(const DomainSpec& dom, double H, const SolveOptions& opt) {
  if (!std::isfinite(H)) throw DomainError("H must be finite");
  if (!(opt.tol > 0.0)) throw DomainError("tolerance must be positive");
  if (std::abs(H) > 0.5 && !opt.allow_large_H)
    throw DomainError("|H| > 1/2 is outside the range where the Dirichlet problem is known to be solvable");

  GraphSolution sol{dom, H, opt.tol, {}, {}, 0.0, {}, {}};
  if (std::abs(H) > 0.5) sol.warnings.push_back("|H| > 1/2: no existence guarantee");
  const double kmin = boundary_curvature_min(dom);
  if (!(kmin > 1.0)) {
    std::ostringstream w;
    w << "boundary geodesic curvature " << kmin << " is not greater than 1";
    sol.warnings.push_back(w.str());
  }

  const detail::Discretization disc(dom);
  std::vector<double> u(disc.size(), 0.0);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool analyzed = false;

  double t = 0.0, step = opt.initial_step, last_res = 0.0;
  while (t < 1.0) {
    const double t_try = std::min(1.0, t + step);
    std::vector<double> trial = u;
    const auto out = detail::newton(disc, trial, H * t_try, opt, lu, analyzed);
    if (out.converged) {
      u.swap(trial);
      t = t_try;
      last_res = out.residual;
      sol.continuation_trace.push_back({t, out.iters, out.residual});
      continue;
    }
    step *= 0.5;
    if (step < opt.min_step) {
      std::ostringstream m;
      m << "continuation stalled at t = " << t << " (Newton residual " << out.residual << ")";
      throw ContinuationError(m.str(), out.residual, sol.continuation_trace);
    }
  }

  const int m = dom.grid_n() + 1;
  sol.u.assign(static_cast<std::size_t>(m) * m, 0.0);
  sol.interior.assign(sol.u.size(), 0);
  for (std::size_t k = 0; k < disc.size(); ++k) {
    const auto& p = disc.nodes()[k];
    sol.u[disc.flat(p.i, p.j)] = u[k];
    sol.interior[disc.flat(p.i, p.j)] = 1;
  }
  sol.residual_norm = last_res;
  return sol;
}

inline GraphSolution solve_dirichlet(const DomainSpec& dom, double H, double tol = 1e-8) {
  SolveOptions opt;
  opt.tol = tol;
  return solve_dirichlet(dom, H, opt);
}

namespace detail {

inline std::vector<double> unknowns_of(const Discretization& disc, const GraphSolution& sol) {
  std::vector<double> u(disc.size());
  for (std::size_t k = 0; k < disc.size(); ++k) {
    const auto& p = disc.nodes()[k];
    u[k] = sol.at(p.i, p.j);
  }
  return u;
}

}  // namespace detail

/// Max-norm of the discrete operator minus the right side over interior nodes.
inline double pde_residual(const GraphSolution& sol) {
  const detail::Discretization disc(sol.domain);
  std::vector<double> r;
  disc.residual(detail::unknowns_of(disc, sol), sol.H, r);
  return detail::max_abs(r);
}

/// Discrete operator applied to a given function, split by node type.
/// Deep nodes and their four neighbors all have full-length arms; there the
/// truncation error is O(h^2). Near the boundary it is O(h).
struct ResidualSplit {
  double deep = 0.0;
  double near_boundary = 0.0;
};

inline ResidualSplit operator_residual(const DomainSpec& dom, double H,
                                       const std::function<double(double, double)>& u) {
  const detail::Discretization disc(dom);
  std::vector<double> v(disc.size()), r;
  for (std::size_t k = 0; k < disc.size(); ++k) v[k] = u(disc.nodes()[k].x, disc.nodes()[k].y);
  disc.residual(v, H, r);
  ResidualSplit out;
  const auto& nodes = disc.nodes();
  for (std::size_t k = 0; k < disc.size(); ++k) {
    bool deep = nodes[k].regular();
    for (int d = 0; d < 4 && deep; ++d) deep = nodes[nodes[k].nb[d]].regular();
    double& slot = deep ? out.deep : out.near_boundary;
    slot = std::max(slot, std::abs(r[k]));
  }
  return out;
}

/// Max |u(p) - u(reflect(p))| over interior nodes whose mirror image has a
/// full 4 x 4 interior stencil for cubic interpolation (so interpolation
/// error stays below the discretization error). Disk-model solutions only. With
/// `strict`, a reflection moving the boundary by more than one grid step is
/// rejected.
inline double symmetry_deviation(const GraphSolution& sol, const Geodesic& mirror, bool strict = true) {
  const DomainSpec& dom = sol.domain;
  if (dom.model() != Model::Disk) throw DomainError("symmetry_deviation expects a disk-model solution");
  if (strict) {
    double worst = 0.0;
    for (int k = 0; k < 256; ++k) {
      const auto b = dom.boundary_point(2.0 * std::numbers::pi * k / 256);
      double rx = 0, ry = 0;
      mirror.reflect(b[0], b[1], rx, ry);
      const auto g = dom.grad_phi(rx, ry);
      worst = std::max(worst, std::abs(dom.phi(rx, ry)) / std::hypot(g[0], g[1]));
    }
    if (worst > dom.grid_h()) {
      std::ostringstream m;
      m << "reflection does not preserve the domain (boundary moves by " << worst << ")";
      throw DomainError(m.str());
    }
  }
  double dev = 0.0;
  for (int j = 0; j <= sol.n(); ++j)
    for (int i = 0; i <= sol.n(); ++i) {
      if (!sol.is_interior(i, j)) continue;
      double rx = 0, ry = 0;
      mirror.reflect(sol.x(i), sol.y(j), rx, ry);
      if (const auto v = sol.interpolate_cubic(rx, ry)) dev = std::max(dev, std::abs(sol.at(i, j) - *v));
    }
  return dev;
}

/// CSV dump `x,y,u` of the interior nodes, row by row.
inline void write_solution_csv(std::ostream& out, const GraphSolution& sol,
                               const std::vector<std::string>& comments = {}) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "x,y,u\n";
  char buf[96];
  for (int j = 0; j <= sol.n(); ++j)
    for (int i = 0; i <= sol.n(); ++i) {
      if (!sol.is_interior(i, j)) continue;
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", sol.x(i), sol.y(j), sol.at(i, j));
      out << buf;
    }
}

}  // namespace cmc
