#pragma once

#include <array>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmc/hyperbolic.hpp"
#include "cmc/profile.hpp"

namespace cmc {

/// Triangulated surface of revolution; vertices in disk-model coordinates.
struct RotationalMesh {
  std::vector<SpacePoint> vertices;
  std::vector<std::array<int, 3>> faces;
  ProfileCurve source;
};

enum class RevolveMode {
  Fundamental,  ///< only the sampled lambda-graph
  Extended,     ///< with the symmetric/periodic extension (one period)
};

/// Revolves the profile about the axis {0} x R. Curve points on the axis
/// become a single vertex joined to the next ring by a fan.
inline RotationalMesh revolve(const ProfileCurve& profile, int n_theta,
                              RevolveMode mode = RevolveMode::Fundamental) {
  if (n_theta < 3) throw DomainError("revolve: n_theta must be >= 3");
  std::vector<CurvePoint> pts;
  if (mode == RevolveMode::Extended) {
    pts = extended_curve(profile);
  } else {
    for (const auto& s : profile.samples) pts.push_back({s.rho, s.lambda});
  }

  RotationalMesh mesh{{}, {}, profile};
  // First vertex index of each curve point, and whether it sits on the axis.
  std::vector<int> first(pts.size());
  std::vector<bool> axis(pts.size());
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    first[k] = static_cast<int>(mesh.vertices.size());
    axis[k] = pts[k].rho == 0.0;
    if (axis[k]) {
      mesh.vertices.push_back({DiskPoint{0.0, 0.0}, pts[k].t});
      continue;
    }
    for (int j = 0; j < n_theta; ++j)
      mesh.vertices.push_back({rho_to_disk(pts[k].rho, two_pi * j / n_theta), pts[k].t});
  }

  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const int a = first[k], b = first[k + 1];
    if (axis[k] && axis[k + 1]) continue;
    for (int j = 0; j < n_theta; ++j) {
      const int jn = (j + 1) % n_theta;
      if (axis[k]) {
        mesh.faces.push_back({a, b + j, b + jn});
      } else if (axis[k + 1]) {
        mesh.faces.push_back({a + j, a + jn, b});
      } else {
        mesh.faces.push_back({a + j, a + jn, b + jn});
        mesh.faces.push_back({a + j, b + jn, b + j});
      }
    }
  }
  return mesh;
}

/// Max over samples of the normalized first-integral defect
///     | tanh(rho) lambda'/sqrt(1+lambda'^2) - (d + 2H cosh rho)/cosh rho |.
/// Dividing by cosh(rho) keeps the gauge at O(1) magnitude for large rho.
/// Vertical samples use lambda'/sqrt(1+lambda'^2) = sign(lambda').
inline double mean_curvature_residual(const ProfileCurve& profile) {
  const double H = profile.params.H(), d = profile.params.d();
  double worst = 0.0;
  for (const auto& s : profile.samples) {
    const double lp = s.lambda_prime;
    const double slope = std::isinf(lp) ? std::copysign(1.0, lp) : lp / std::sqrt(1.0 + lp * lp);
    const double c = std::cosh(s.rho);
    const double r = std::abs(std::tanh(s.rho) * slope - (d / c + 2.0 * H));
    worst = std::max(worst, r);
  }
  return worst;
}

/// Independent second-order check of the profile: applies the rotational
/// form of the graph operator,
///     (1/sinh rho) d/drho ( sinh(rho) u' / sqrt(1 + u'^2) ),
/// by centered differences of step h_step around each interior sample and
/// returns the max deviation from 2H. Increments of u are integrated from
/// lambda' to `tol`, so the result measures the stencil, not the sampling.
inline double graph_equation_residual(const ProfileCurve& profile, double h_step,
                                      double tol = 1e-15) {
  if (!(h_step > 0.0)) throw DomainError("graph_equation_residual: h_step must be positive");
  const FamilyClass fam = profile.params.family();
  if (fam == FamilyClass::MinimalSlice) return 0.0;
  if (fam == FamilyClass::Cylinder) throw DomainError("graph_equation_residual: cylinder is not a graph");
  const RotationalProfile prof(profile.params);
  const double H = profile.params.H();
  const double lo = prof.rho1();
  const double hi = prof.upper();
  auto phi = [](double up) { return up / std::sqrt(1.0 + up * up); };
  double worst = 0.0;
  for (const auto& s : profile.samples) {
    const double rho = s.rho;
    if (rho - h_step < lo || rho + h_step > hi || rho <= 0.0) continue;
    if (std::isinf(s.lambda_prime)) continue;
    const double up_plus = prof.integral(rho, rho + h_step, tol) / h_step;
    const double up_minus = prof.integral(rho - h_step, rho, tol) / h_step;
    const double flux_plus = std::sinh(rho + 0.5 * h_step) * phi(up_plus);
    const double flux_minus = std::sinh(rho - 0.5 * h_step) * phi(up_minus);
    const double div = (flux_plus - flux_minus) / (h_step * std::sinh(rho));
    worst = std::max(worst, std::abs(div - 2.0 * H));
  }
  return worst;
}

namespace detail {

inline std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing: " + std::strerror(errno));
  return out;
}

inline void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed: " + std::strerror(errno));
}

inline void write_comment_lines(std::ostream& out, const std::vector<std::string>& lines) {
  for (const auto& l : lines) out << "# " << l << '\n';
}

}  // namespace detail

/// CSV with header `rho,lambda,lambda_prime`, 17 significant digits,
/// vertical samples written as inf / -inf. Optional `# ` comment lines first.
inline void write_profile_csv(std::ostream& out, const ProfileCurve& profile,
                              const std::vector<std::string>& comments = {}) {
  detail::write_comment_lines(out, comments);
  out << "rho,lambda,lambda_prime\n";
  for (const auto& s : profile.samples)
    out << detail::format_real(s.rho) << ',' << detail::format_real(s.lambda) << ','
        << detail::format_real(s.lambda_prime) << '\n';
}

inline void export_csv(const ProfileCurve& profile, const std::string& path,
                       const std::vector<std::string>& comments = {}) {
  auto out = detail::open_output(path);
  write_profile_csv(out, profile, comments);
  detail::finish_output(out, path);
}

/// Reads back a file written by export_csv.
inline std::vector<ProfileSample> read_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<ProfileSample> out;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "rho,lambda,lambda_prime") throw std::runtime_error("unexpected CSV header: " + line);
      header = true;
      continue;
    }
    std::istringstream row(line);
    std::string a, b, c;
    std::getline(row, a, ',');
    std::getline(row, b, ',');
    std::getline(row, c, ',');
    out.push_back({std::strtod(a.c_str(), nullptr), std::strtod(b.c_str(), nullptr),
                   std::strtod(c.c_str(), nullptr)});
  }
  return out;
}

/// ASCII OBJ: `v x y t` lines (disk-model x, y and height t), then 1-based
/// `f i j k` lines.
inline void write_obj(std::ostream& out, const RotationalMesh& mesh,
                      const std::vector<std::string>& comments = {}) {
  detail::write_comment_lines(out, comments);
  for (const auto& v : mesh.vertices)
    out << "v " << detail::format_real(v.base.x()) << ' ' << detail::format_real(v.base.y()) << ' '
        << detail::format_real(v.t) << '\n';
  for (const auto& f : mesh.faces)
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

inline void export_obj(const RotationalMesh& mesh, const std::string& path,
                       const std::vector<std::string>& comments = {}) {
  auto out = detail::open_output(path);
  write_obj(out, mesh, comments);
  detail::finish_output(out, path);
}

}  // namespace cmc
