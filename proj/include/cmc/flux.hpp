#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "cmc/graph_pde.hpp"
#include "cmc/profile.hpp"
#include "cmc/quadrature.hpp"

namespace cmc {

/// Both sides of the flux identity  int_C nu_3 = 2 H Area(Omega).
struct FluxReport {
  double boundary_integral = 0.0;
  double area = 0.0;
  double H = 0.0;
  double defect = 0.0;
};

inline FluxReport make_flux_report(double boundary_integral, double area, double H) {
  return {boundary_integral, area, H, std::abs(boundary_integral - 2.0 * H * area)};
}

/// Hyperbolic area int F^2 dx dy, integrated in polar coordinates about the
/// domain's star center (inner integral along rays, outer over the angle).
inline double hyperbolic_area(const DomainSpec& dom, double tol = 1e-10) {
  if (!(tol > 0.0)) throw DomainError("area tolerance must be positive");
  const auto c = dom.star_center();
  const Model m = dom.model();
  const double two_pi = 2.0 * std::numbers::pi;
  auto ray = [&](double a) {
    const double ca = std::cos(a), sa = std::sin(a);
    auto g = [&](double r) {
      const double F = model_factor(m, c[0] + r * ca, c[1] + r * sa);
      return F * F * r;
    };
    return integrate(g, 0.0, dom.boundary_radius(a), 0.1 * tol / two_pi).value;
  };
  return integrate(ray, 0.0, two_pi, tol).value;
}

/// Exact flux balance of a rotational graph with parameter d truncated at
/// geodesic radius rho_c: the conormal's vertical component on the circle
/// is g(rho_c)/sinh(rho_c) by the first integral, so the boundary integral
/// is 2 pi (d + 2H cosh rho_c). The default d = -2H is the cap through the
/// axis. `mirrored` reflects the cap through the slice, which reverses the
/// orientation and reports mean curvature -H.
inline FluxReport cap_flux(double H, double rho_c, std::optional<double> d = std::nullopt,
                           bool mirrored = false) {
  if (!(H > 0.0 && H <= 0.5)) throw DomainError("cap_flux needs H in (0, 1/2]");
  if (!(rho_c > 0.0 && std::isfinite(rho_c))) throw DomainError("cap radius must be positive");
  const double dd = d.value_or(-2.0 * H);
  if (d) {
    const auto p = ProfileParams::make(H, dd);
    const RotationalProfile prof(p);
    if (rho_c < prof.rho1() || rho_c > prof.upper())
      throw DomainError("the profile does not reach the truncation radius");
  }
  const double area = 2.0 * std::numbers::pi * (std::cosh(rho_c) - 1.0);
  const double sign = mirrored ? -1.0 : 1.0;
  const double boundary = sign * 2.0 * std::numbers::pi * (dd + 2.0 * H * std::cosh(rho_c));
  return make_flux_report(boundary, area, sign * H);
}

/// Boundary point of a solution where a grid line leaves the domain, with
/// the integrand (du/dn)_E / W of the Euclidean line integral.
struct FluxSample {
  double x, y, angle, value;
};

/// Samples of (du/dn)/W at the grid-line crossings of the boundary. Along
/// each grid line the normal derivative comes from the one-sided quadratic
/// through the crossing (u = 0) and the next two nodes inward; crossings
/// where the line meets the boundary at more than 45 degrees from the normal
/// are skipped, the perpendicular lines cover them.
inline std::vector<FluxSample> boundary_flux_samples(const GraphSolution& sol) {
  const detail::Discretization disc(sol.domain);
  const auto& dom = sol.domain;
  const auto c = dom.star_center();
  const double h = disc.h();
  static constexpr int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
  std::vector<FluxSample> out;
  for (const auto& p : disc.nodes()) {
    for (int d = 0; d < 4; ++d) {
      if (p.nb[d] >= 0) continue;
      const double s1 = p.arm[d];
      const double bx = p.x + di[d] * s1, by = p.y + dj[d] * s1;
      const auto g = dom.grad_phi(bx, by);
      const double gn = std::hypot(g[0], g[1]);
      const double dot = -(g[0] * di[d] + g[1] * dj[d]) / gn;  // n . (inward grid direction)
      if (std::abs(dot) < std::numbers::sqrt2 / 2) continue;
      const double u1 = sol.at(p.i, p.j);
      const int i2 = p.i - di[d], j2 = p.j - dj[d];
      double deriv;  // along the inward grid direction, at the crossing
      if (disc.index(i2, j2) >= 0) {
        const double s2 = s1 + h, u2 = sol.at(i2, j2);
        deriv = u1 * s2 / (s1 * (s2 - s1)) - u2 * s1 / (s2 * (s2 - s1));
      } else {
        deriv = u1 / s1;
      }
      const double un = deriv / dot;
      const double F = model_factor(dom.model(), bx, by);
      out.push_back({bx, by, std::atan2(by - c[1], bx - c[0]), un / std::sqrt(1.0 + un * un / (F * F))});
    }
  }
  std::sort(out.begin(), out.end(), [](const FluxSample& a, const FluxSample& b) { return a.angle < b.angle; });
  return out;
}

/// Flux identity for a converged solution: the conormal integral is
/// int (du/dn)_E / W ds_E over the boundary, by the trapezoid rule on the
/// polygon through the crossing samples.
inline FluxReport solution_flux(const GraphSolution& sol, double area_tol = 1e-10) {
  if (sol.continuation_trace.empty() || sol.continuation_trace.back().t != 1.0 ||
      !(sol.residual_norm <= sol.tolerance))
    throw DomainError("solution_flux needs a converged solution");
  auto pts = boundary_flux_samples(sol);
  // Merge coincident crossings (a grid node exactly on the boundary).
  const double eps = 1e-12 * sol.h();
  std::vector<FluxSample> s;
  for (const auto& q : pts)
    if (s.empty() || std::hypot(q.x - s.back().x, q.y - s.back().y) > eps) s.push_back(q);
  if (s.size() > 1 && std::hypot(s.front().x - s.back().x, s.front().y - s.back().y) <= eps) s.pop_back();
  if (s.size() < 3) throw DomainError("too few boundary samples for the flux integral");
  double total = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto& a = s[k];
    const auto& b = s[(k + 1) % s.size()];
    total += 0.5 * (a.value + b.value) * std::hypot(b.x - a.x, b.y - a.y);
  }
  return make_flux_report(total, hyperbolic_area(sol.domain, area_tol), sol.H);
}

/// Face-flux balance over a block of regular nodes [i0, i1] x [j0, j1]:
/// outflow through the block's outer faces (times face length h) against
/// the source 2H F^2 h^2 summed over the block. Their difference equals the
/// summed nodal residual times h^2.
struct DiscreteBalance {
  double outflow = 0.0;
  double source = 0.0;
  double residual_sum = 0.0;
};

inline DiscreteBalance discrete_flux_balance(const GraphSolution& sol, int i0, int i1, int j0, int j1) {
  const detail::Discretization disc(sol.domain);
  const auto u = detail::unknowns_of(disc, sol);
  const auto q = disc.face_fluxes(u);
  const double h = disc.h();
  DiscreteBalance b;
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) {
      const int k = i >= 0 && j >= 0 && i <= disc.n() && j <= disc.n() ? disc.index(i, j) : -1;
      if (k < 0 || !disc.nodes()[k].regular()) throw DomainError("block contains a node that is not regular");
      const auto& p = disc.nodes()[k];
      if (i == i1) b.outflow += q[p.face[detail::E]] * h;
      if (i == i0) b.outflow -= q[p.face[detail::W]] * h;
      if (j == j1) b.outflow += q[p.face[detail::N]] * h;
      if (j == j0) b.outflow -= q[p.face[detail::S]] * h;
      b.source += 2.0 * sol.H * p.F * p.F * h * h;
      b.residual_sum += disc.row(p, q, sol.H) * h * h;
    }
  return b;
}

}  // namespace cmc
