#pragma once

// Command-line front end. `run` parses argv, dispatches to a subcommand and
// returns the process exit code: 0 on success, 1 on numerical or I/O
// failure, 2 on usage errors (including inadmissible parameters).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cmc/flux.hpp"
#include "cmc/graph_pde.hpp"
#include "cmc/profile.hpp"
#include "cmc/surface.hpp"

namespace cmc::cli {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Command line and settings repeated at the top of every artifact.
struct Provenance {
  std::string command;
  std::vector<std::pair<std::string, double>> settings;

  std::vector<std::string> lines() const {
    std::vector<std::string> out{std::string("cmc ") + kVersion, "command: " + command};
    if (!settings.empty()) {
      std::string s = "settings:";
      for (const auto& [k, v] : settings) s += " " + k + "=" + detail::format_real(v);
      out.push_back(s);
    }
    return out;
  }

  Json json() const {
    Json j;
    j["version"] = kVersion;
    j["command"] = command;
    Json s = Json::object();
    for (const auto& [k, v] : settings) {
      if (v == std::trunc(v) && std::abs(v) < 1e15)
        s[k] = static_cast<long long>(v);
      else
        s[k] = v;
    }
    j["settings"] = s;
    return j;
  }
};

inline Json to_json(const FluxReport& r) {
  return Json{{"boundary_integral", r.boundary_integral}, {"area", r.area}, {"H", r.H}, {"defect", r.defect}};
}

inline Json to_json(const std::vector<ContinuationStep>& trace) {
  Json a = Json::array();
  for (const auto& s : trace) a.push_back({{"t", s.t}, {"newton_iters", s.newton_iters}, {"residual", s.residual}});
  return a;
}

namespace detail {

// Writes `text` to `path`, or to `out` when the path is empty.
inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  auto f = cmc::detail::open_output(path);
  f << text;
  cmc::detail::finish_output(f, path);
}

inline std::string fmt(double v) { return cmc::detail::format_real(v); }

struct Series {
  std::string name;
  std::vector<double> x, y;
};

inline std::string svg_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

/// Line chart with linear or log-x axes, one polyline per series.
inline std::string svg_line_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                                  const std::vector<Series>& series, bool log_x, const Provenance& prov,
                                  std::optional<double> hline = std::nullopt) {
  const double W = 720, Hh = 480, left = 70, right = 20, top = 40, bottom = 60;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  auto tx = [&](double x) { return log_x ? std::log10(x) : x; };
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.y[k])) continue;
      x0 = std::min(x0, tx(s.x[k]));
      x1 = std::max(x1, tx(s.x[k]));
      y0 = std::min(y0, s.y[k]);
      y1 = std::max(y1, s.y[k]);
    }
  if (hline) {
    y0 = std::min(y0, *hline);
    y1 = std::max(y1, *hline);
  }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return left + (tx(x) - x0) / (x1 - x0) * (W - left - right); };
  auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * (Hh - top - bottom); };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  for (const auto& l : prov.lines()) o << "<!-- " << svg_escape(l) << " -->\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hh << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << svg_escape(title) << "</text>\n";
  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << W - left - right << "\" height=\"" << Hh - top - bottom
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = x0 + (x1 - x0) * k / 5, yv = y0 + (y1 - y0) * k / 5;
    const double xs = left + (W - left - right) * k / 5, ys = py(yv);
    o << "<text x=\"" << xs << "\" y=\"" << Hh - bottom + 18 << "\" text-anchor=\"middle\">"
      << tick_label(log_x ? std::pow(10.0, xv) : xv) << "</text>\n";
    o << "<text x=\"" << left - 6 << "\" y=\"" << ys + 4 << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
  }
  o << "<text x=\"" << W / 2 << "\" y=\"" << Hh - 16 << "\" text-anchor=\"middle\">" << svg_escape(xlabel) << "</text>\n";
  o << "<text x=\"18\" y=\"" << Hh / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << Hh / 2 << ")\">"
    << svg_escape(ylabel) << "</text>\n";
  if (hline)
    o << "<line x1=\"" << left << "\" x2=\"" << W - right << "\" y1=\"" << py(*hline) << "\" y2=\"" << py(*hline)
      << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  for (std::size_t s = 0; s < series.size(); ++s) {
    o << "<polyline fill=\"none\" stroke=\"" << colors[s % 6] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < series[s].x.size(); ++k) {
      if (!std::isfinite(series[s].y[k])) continue;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(series[s].x[k]), py(series[s].y[k]));
      o << buf;
    }
    o << "\"/>\n";
    o << "<text x=\"" << left + 10 << "\" y=\"" << top + 16 + 14 * s << "\" fill=\"" << colors[s % 6] << "\">"
      << svg_escape(series[s].name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

/// Parses `a:b:log:n` or `a:b:lin:n` into n points including both ends.
inline std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 4) throw UsageError("range must look like a:b:log:n or a:b:lin:n, got '" + text + "'");
  double a = 0, b = 0;
  long n = 0;
  try {
    std::size_t pos = 0;
    a = std::stod(parts[0], &pos);
    if (pos != parts[0].size()) throw std::invalid_argument("a");
    b = std::stod(parts[1], &pos);
    if (pos != parts[1].size()) throw std::invalid_argument("b");
    n = std::stol(parts[3], &pos);
    if (pos != parts[3].size()) throw std::invalid_argument("n");
  } catch (const std::exception&) {
    throw UsageError("malformed number in range '" + text + "'");
  }
  const bool log = parts[2] == "log";
  if (!log && parts[2] != "lin") throw UsageError("range spacing must be 'log' or 'lin'");
  if (n < 2) throw UsageError("range needs at least 2 points");
  if (log && !(a > 0 && b > 0)) throw UsageError("log range needs positive ends");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(n - 1);
    v[static_cast<std::size_t>(k)] = log ? std::pow(10.0, std::log10(a) + s * (std::log10(b) - std::log10(a))) : a + s * (b - a);
  }
  v.front() = a;
  v.back() = b;
  return v;
}

/// Evaluates f(0..n-1) on up to `threads` workers; results keep their order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, int threads, F f) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t k = first; k < n; k += stride) {
      try {
        out[k] = f(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const auto t = static_cast<std::size_t>(std::max(1, threads));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < t; ++w) pool.emplace_back(work, w, t);
  work(0, t);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

inline Json classification_json(double H, double d) {
  Json j;
  const FamilyClass c = classify(H, d);
  j["class"] = std::string(to_string(c));
  if (c == FamilyClass::Inadmissible) return j;
  const auto p = ProfileParams::make(H, d);
  const auto dom = thresholds(p);
  j["H"] = p.H();
  j["d"] = p.d();
  j["rho1"] = dom.rho1;
  if (dom.rho0) j["rho0"] = *dom.rho0;
  if (dom.rho2) j["rho2"] = *dom.rho2;
  if (p.H() > 0.5) {
    const auto r = special_radii(p.H());
    j["special_radii"] = {{"sphere_rho2", r.sphere_rho2}, {"cylinder_rho", r.cylinder_rho},
                          {"unduloid_limit_rho", r.unduloid_limit_rho}};
  }
  return j;
}

struct DomainFlags {
  double disk_radius = 1.0;
  double center_rho = 0.0;
  double center_angle = 0.0;
  std::string model = "disk";
  std::vector<double> ellipse;
  double H = 0.3;
  int grid_n = 128;
  double tol = 1e-8;
  bool allow_large_H = false;

  void attach(CLI::App* app, CLI::Option*& disk_opt, CLI::Option*& ell_opt) {
    disk_opt = app->add_option("--disk-radius", disk_radius, "geodesic radius of a disk domain")
                   ->check(CLI::PositiveNumber)
                   ->capture_default_str();
    app->add_option("--center-rho", center_rho, "distance of the disk center from the origin")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app->add_option("--center-angle", center_angle, "polar angle of the disk center")->capture_default_str();
    app->add_option("--model", model, "chart: disk or halfplane")
        ->check(CLI::IsMember({"disk", "halfplane"}))
        ->capture_default_str();
    ell_opt = app->add_option("--ellipse", ellipse, "level-set ellipse a,b,angle centered at the origin (disk chart)")
                  ->delimiter(',')
                  ->expected(3);
    disk_opt->excludes(ell_opt);
    app->add_option("--H", H, "mean curvature")->capture_default_str();
    app->add_option("--grid-n", grid_n, "grid resolution per axis")->check(CLI::Range(16, 1024))->capture_default_str();
    app->add_option("--tol", tol, "residual tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_flag("--allow-large-h", allow_large_H, "permit |H| > 1/2");
  }

  DomainSpec build() const {
    if (!ellipse.empty()) {
      if (model != "disk") throw UsageError("--ellipse is only available in the disk chart");
      const double a = ellipse[0], b = ellipse[1], ang = ellipse[2];
      if (!(a > 0 && b > 0)) throw UsageError("ellipse semi-axes must be positive");
      const double c = std::cos(ang), s = std::sin(ang);
      auto phi = [=](double x, double y) {
        const double u = c * x + s * y, v = -s * x + c * y;
        return std::sqrt((u / a) * (u / a) + (v / b) * (v / b)) - 1.0;
      };
      const double r = std::max(a, b) * 1.05;
      if (!(r < 1.0)) throw UsageError("ellipse must lie inside the unit disk");
      return DomainSpec::level_set(phi, {-r, r, -r, r}, grid_n);
    }
    const DiskPoint c = rho_to_disk(center_rho, center_angle);
    if (model == "halfplane") return DomainSpec::geodesic_disk(disk_to_halfplane(c), disk_radius, grid_n);
    return DomainSpec::geodesic_disk(c, disk_radius, grid_n);
  }

  SolveOptions options() const {
    SolveOptions o;
    o.tol = tol;
    o.allow_large_H = allow_large_H;
    return o;
  }
};

// Max deviation from the rotational solution lambda(rho) - lambda(R), d = -2H.
inline std::optional<double> rotational_oracle_error(const GraphSolution& sol) {
  const auto& dom = sol.domain;
  if (dom.kind() != DomainKind::GeodesicDisk || sol.H == 0.0 || std::abs(sol.H) > 0.5) return std::nullopt;
  const double H = std::abs(sol.H), sign = sol.H > 0 ? 1.0 : -1.0;
  const auto p = ProfileParams::make(H, -2 * H);
  const double R = dom.geodesic_radius();
  const double top = lambda_eval(p, R, 1e-13);
  const auto c = dom.geodesic_center();
  double err = 0.0;
  for (int j = 0; j <= sol.n(); ++j)
    for (int i = 0; i <= sol.n(); ++i) {
      if (!sol.is_interior(i, j)) continue;
      const double rho = dom.model() == Model::Disk
                             ? geodesic_distance(DiskPoint{sol.x(i), sol.y(j)}, DiskPoint{c[0], c[1]})
                             : geodesic_distance(HalfPlanePoint{sol.x(i), sol.y(j)}, HalfPlanePoint{c[0], c[1]});
      err = std::max(err, std::abs(sol.at(i, j) - sign * (lambda_eval(p, rho, 1e-13) - top)));
    }
  return err;
}

inline Json solution_json(const GraphSolution& sol, const Provenance& prov) {
  Json j;
  j["provenance"] = prov.json();
  j["domain"] = sol.domain.describe();
  j["H"] = sol.H;
  j["grid_n"] = sol.n();
  j["interior_nodes"] = sol.interior_count();
  j["residual_norm"] = sol.residual_norm;
  j["tolerance"] = sol.tolerance;
  j["max_abs_u"] = sol.max_abs_u();
  j["boundary_curvature_min"] = boundary_curvature_min(sol.domain);
  if (const auto e = rotational_oracle_error(sol)) j["rotational_oracle_error"] = *e;
  j["continuation_trace"] = to_json(sol.continuation_trace);
  j["warnings"] = sol.warnings;
  return j;
}

inline std::string join_command(int argc, const char* const* argv) {
  std::string s = "cmc";
  for (int k = 1; k < argc; ++k) s += std::string(" ") + argv[k];
  return s;
}

}  // namespace detail

/// Runs the command line; see `cmc --help`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Constant mean curvature surfaces in H^2 x R: rotational profiles, catenoid heights, "
               "and the Dirichlet problem for vertical graphs."};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Provenance prov{detail::join_command(argc, argv), {}};
  std::function<void()> action;

  // classify
  double cH = 0, cd = 0;
  auto* classify_cmd = app.add_subcommand("classify", "classify the rotational family for (H, d); JSON on stdout");
  classify_cmd->add_option("--H", cH, "mean curvature")->required();
  classify_cmd->add_option("--d", cd, "first-integral parameter")->required();
  classify_cmd->callback([&] {
    action = [&] {
      Json j;
      j["provenance"] = prov.json();
      const Json cj = detail::classification_json(cH, cd);
      for (auto it = cj.begin(); it != cj.end(); ++it) j[it.key()] = it.value();
      out << j.dump(2) << '\n';
    };
  });

  // profile
  double pH = 0, pd = 0, rho_max = 30, ptol = 1e-10, cyl_height = 1;
  int pn = 200;
  std::string pout, psvg;
  auto* profile_cmd = app.add_subcommand("profile", "sample the profile curve (rho, lambda, lambda') to CSV");
  profile_cmd->add_option("--H", pH, "mean curvature")->required();
  profile_cmd->add_option("--d", pd, "first-integral parameter")->required();
  profile_cmd->add_option("--n", pn, "number of samples")->check(CLI::Range(2, 1000000))->capture_default_str();
  profile_cmd->add_option("--rho-max", rho_max, "cutoff for unbounded profiles")->check(CLI::PositiveNumber)->capture_default_str();
  profile_cmd->add_option("--tol", ptol, "quadrature tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  profile_cmd->add_option("--cylinder-height", cyl_height, "segment height for the cylinder")->check(CLI::PositiveNumber)->capture_default_str();
  profile_cmd->add_option("--out", pout, "CSV path (stdout if omitted)");
  profile_cmd->add_option("--svg", psvg, "also plot lambda against rho");
  profile_cmd->callback([&] {
    action = [&] {
      prov.settings = {{"tol", ptol}, {"rho_max", rho_max}, {"n", pn}};
      const auto c = generate_profile(ProfileParams::make(pH, pd), pn, ptol, {rho_max, cyl_height});
      std::ostringstream csv;
      auto lines = prov.lines();
      lines.push_back("class: " + std::string(to_string(c.params.family())) + ", extension: " + std::string(to_string(c.extension)));
      write_profile_csv(csv, c, lines);
      detail::emit(pout, csv.str(), out);
      if (!psvg.empty()) {
        detail::Series s{"H=" + detail::fmt(c.params.H()) + " d=" + detail::fmt(c.params.d()), {}, {}};
        for (const auto& p : c.samples) {
          s.x.push_back(p.rho);
          s.y.push_back(p.lambda);
        }
        detail::emit(psvg, detail::svg_line_chart("profile curve", "rho", "lambda", {s}, false, prov), out);
      }
    };
  });

  // mesh
  double mH = 0, md = 0, m_rho_max = 5, mtol = 1e-10;
  int mn = 100, n_theta = 64;
  bool extended = false;
  std::string mout;
  auto* mesh_cmd = app.add_subcommand("mesh", "revolve a profile into an OBJ mesh (disk-model x, y and height t)");
  mesh_cmd->add_option("--H", mH, "mean curvature")->required();
  mesh_cmd->add_option("--d", md, "first-integral parameter")->required();
  mesh_cmd->add_option("--n", mn, "profile samples")->check(CLI::Range(2, 100000))->capture_default_str();
  mesh_cmd->add_option("--n-theta", n_theta, "angular divisions")->check(CLI::Range(3, 100000))->capture_default_str();
  mesh_cmd->add_option("--rho-max", m_rho_max, "cutoff for unbounded profiles")->check(CLI::PositiveNumber)->capture_default_str();
  mesh_cmd->add_option("--tol", mtol, "quadrature tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  mesh_cmd->add_flag("--extended", extended, "include the reflected or periodic extension");
  mesh_cmd->add_option("--out", mout, "OBJ path (stdout if omitted)");
  mesh_cmd->callback([&] {
    action = [&] {
      prov.settings = {{"tol", mtol}, {"rho_max", m_rho_max}, {"n", mn}, {"n_theta", n_theta}};
      const auto c = generate_profile(ProfileParams::make(mH, md), mn, mtol, {m_rho_max, 1.0});
      const auto mesh = revolve(c, n_theta, extended ? RevolveMode::Extended : RevolveMode::Fundamental);
      std::ostringstream o;
      write_obj(o, mesh, prov.lines());
      detail::emit(mout, o.str(), out);
    };
  });

  // height
  double hd = 1.0, htol = 1e-10;
  std::string hsweep, hout, hsvg;
  bool hderiv = false;
  auto* height_cmd = app.add_subcommand("height", "catenoid height h(d) at one d or over a range");
  auto* hd_opt = height_cmd->add_option("--d", hd, "catenoid parameter (> 0)");
  auto* hs_opt = height_cmd->add_option("--sweep", hsweep, "range a:b:log:n or a:b:lin:n");
  hd_opt->excludes(hs_opt);
  height_cmd->add_option("--tol", htol, "quadrature tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  height_cmd->add_flag("--derivative", hderiv, "add a column with h'(d)");
  height_cmd->add_option("--out", hout, "CSV path (stdout if omitted)");
  height_cmd->add_option("--svg", hsvg, "also plot h against d");
  height_cmd->callback([&] {
    action = [&] {
      prov.settings = {{"tol", htol}};
      const auto ds = hsweep.empty() ? std::vector<double>{hd} : detail::parse_range(hsweep);
      std::ostringstream csv;
      cmc::detail::write_comment_lines(csv, prov.lines());
      csv << (hderiv ? "d,h,h_prime\n" : "d,h\n");
      detail::Series s{"h(d)", {}, {}};
      for (double d : ds) {
        const double h = catenoid_height(d, htol);
        csv << detail::fmt(d) << ',' << detail::fmt(h);
        if (hderiv) csv << ',' << detail::fmt(catenoid_height_derivative(d, htol));
        csv << '\n';
        s.x.push_back(d);
        s.y.push_back(h);
      }
      detail::emit(hout, csv.str(), out);
      if (!hsvg.empty()) {
        const bool logx = hsweep.find(":log:") != std::string::npos;
        detail::emit(hsvg, detail::svg_line_chart("catenoid height", "d", "h(d)", {s}, logx, prov, std::numbers::pi), out);
      }
    };
  });

  // solve
  detail::DomainFlags sflags;
  CLI::Option *s_disk = nullptr, *s_ell = nullptr;
  std::string sout;
  auto* solve_cmd = app.add_subcommand("solve", "solve the Dirichlet problem u = 0 on the boundary for a CMC graph");
  sflags.attach(solve_cmd, s_disk, s_ell);
  solve_cmd->add_option("--out", sout, "prefix: writes <prefix>.csv (x,y,u) and <prefix>.json");
  solve_cmd->callback([&] {
    action = [&] {
      prov.settings = {{"tol", sflags.tol}, {"grid_n", sflags.grid_n}};
      const auto sol = solve_dirichlet(sflags.build(), sflags.H, sflags.options());
      for (const auto& w : sol.warnings) err << "warning: " << w << '\n';
      const std::string js = detail::solution_json(sol, prov).dump(2) + "\n";
      if (sout.empty()) {
        out << js;
        return;
      }
      std::ostringstream csv;
      write_solution_csv(csv, sol, prov.lines());
      detail::emit(sout + ".csv", csv.str(), out);
      detail::emit(sout + ".json", js, out);
    };
  });

  // flux
  detail::DomainFlags fflags;
  CLI::Option *f_disk = nullptr, *f_ell = nullptr;
  bool fcap = false, fmirror = false;
  double rho_c = 1.0, farea_tol = 1e-10;
  std::optional<double> fd;
  std::string fout;
  auto* flux_cmd = app.add_subcommand("flux", "flux identity: boundary conormal integral against 2H area");
  fflags.attach(flux_cmd, f_disk, f_ell);
  auto* cap_opt = flux_cmd->add_flag("--cap", fcap, "closed-form rotational cap instead of a PDE solve");
  flux_cmd->add_option("--rho-c", rho_c, "cap radius")->check(CLI::PositiveNumber)->capture_default_str()->needs(cap_opt);
  flux_cmd->add_option("--d", fd, "cap parameter (default -2H)")->needs(cap_opt);
  flux_cmd->add_flag("--mirrored", fmirror, "mirror the cap through the slice")->needs(cap_opt);
  flux_cmd->add_option("--area-tol", farea_tol, "area quadrature tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  flux_cmd->add_option("--out", fout, "JSON path (stdout if omitted)");
  cap_opt->excludes(f_ell);
  flux_cmd->callback([&] {
    action = [&] {
      Json j;
      if (fcap) {
        prov.settings = {};
        j["provenance"] = prov.json();
        j["source"] = "cap";
        j["report"] = to_json(cap_flux(fflags.H, rho_c, fd, fmirror));
      } else {
        prov.settings = {{"tol", fflags.tol}, {"grid_n", fflags.grid_n}, {"area_tol", farea_tol}};
        const auto sol = solve_dirichlet(fflags.build(), fflags.H, fflags.options());
        for (const auto& w : sol.warnings) err << "warning: " << w << '\n';
        j["provenance"] = prov.json();
        j["source"] = "solution";
        j["domain"] = sol.domain.describe();
        j["residual_norm"] = sol.residual_norm;
        j["report"] = to_json(solution_flux(sol, farea_tol));
      }
      detail::emit(fout, j.dump(2) + "\n", out);
    };
  });

  // sweep
  std::string sw_H = "-1:1:lin:21", sw_d = "-3:3:lin:25", sw_height = "0.001:1000:log:50", sw_prefix = "atlas";
  int threads = 1;
  double sw_tol = 1e-10;
  auto* sweep_cmd = app.add_subcommand("sweep", "classification atlas over an (H, d) grid and catenoid heights, CSV and SVG");
  sweep_cmd->add_option("--H-range", sw_H, "H values, a:b:lin:n")->capture_default_str();
  sweep_cmd->add_option("--d-range", sw_d, "d values, a:b:lin:n")->capture_default_str();
  sweep_cmd->add_option("--height-range", sw_height, "catenoid d values, a:b:log:n")->capture_default_str();
  sweep_cmd->add_option("--tol", sw_tol, "quadrature tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  sweep_cmd->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  sweep_cmd->add_option("--out-prefix", sw_prefix, "writes <prefix>_classes.csv, <prefix>_height.csv, <prefix>_height.svg, <prefix>_profiles.svg")
      ->capture_default_str();
  sweep_cmd->callback([&] {
    action = [&] {
      prov.settings = {{"tol", sw_tol}, {"threads", threads}};
      const auto Hs = detail::parse_range(sw_H), ds = detail::parse_range(sw_d), hs = detail::parse_range(sw_height);
      std::vector<std::pair<double, double>> grid;
      for (double H : Hs)
        for (double d : ds) grid.emplace_back(H, d);
      const auto rows = detail::parallel_map<std::string>(grid.size(), threads, [&](std::size_t k) {
        const auto [H, d] = grid[k];
        const auto j = detail::classification_json(H, d);
        auto field = [&](const char* key) { return j.contains(key) ? detail::fmt(j[key].get<double>()) : std::string(); };
        return detail::fmt(H) + ',' + detail::fmt(d) + ',' + j["class"].get<std::string>() + ',' + field("rho1") + ',' +
               field("rho0") + ',' + field("rho2");
      });
      std::ostringstream cls;
      cmc::detail::write_comment_lines(cls, prov.lines());
      cls << "H,d,class,rho1,rho0,rho2\n";
      for (const auto& r : rows) cls << r << '\n';
      detail::emit(sw_prefix + "_classes.csv", cls.str(), out);

      const auto heights = detail::parallel_map<double>(hs.size(), threads, [&](std::size_t k) {
        return catenoid_height(hs[k], sw_tol);
      });
      std::ostringstream hcsv;
      cmc::detail::write_comment_lines(hcsv, prov.lines());
      hcsv << "d,h\n";
      for (std::size_t k = 0; k < hs.size(); ++k) hcsv << detail::fmt(hs[k]) << ',' << detail::fmt(heights[k]) << '\n';
      detail::emit(sw_prefix + "_height.csv", hcsv.str(), out);
      detail::emit(sw_prefix + "_height.svg",
                   detail::svg_line_chart("catenoid height", "d", "h(d)", {{"h(d)", hs, heights}}, true, prov, std::numbers::pi),
                   out);

      // One representative profile per family.
      const std::vector<std::pair<double, double>> reps = {{0.0, 1.0}, {0.3, 0.2}, {0.3, -0.6}, {0.3, -1.0}, {1.0, -1.8}, {1.0, -3.0}};
      std::vector<detail::Series> curves;
      for (const auto& [H, d] : reps) {
        const auto c = generate_profile(ProfileParams::make(H, d), 120, sw_tol, {3.0, 1.0});
        detail::Series s{std::string(to_string(c.params.family())) + " H=" + detail::fmt(H) + " d=" + detail::fmt(d), {}, {}};
        for (const auto& p : c.samples) {
          s.x.push_back(p.rho);
          s.y.push_back(p.lambda);
        }
        curves.push_back(std::move(s));
      }
      detail::emit(sw_prefix + "_profiles.svg", detail::svg_line_chart("profile curves", "rho", "lambda", curves, false, prov), out);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  try {
    if (action) action();
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ContinuationError& e) {
    err << "numerical failure: " << e.what() << '\n';
    for (const auto& s : e.trace()) err << "  t=" << s.t << " newton=" << s.newton_iters << " residual=" << s.residual << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace cmc::cli
