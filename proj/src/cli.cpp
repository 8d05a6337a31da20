#include "hslab/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "hslab/analysis.hpp"
#include "hslab/bessel.hpp"
#include "hslab/error.hpp"
#include "hslab/flat_metric.hpp"
#include "hslab/metrics.hpp"
#include "hslab/polynomial.hpp"
#include "hslab/variation.hpp"

namespace hslab::cli {

namespace {

const std::vector<std::string> kFieldNames{"u", "w", "r", "F_re", "F_im", "delta"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

struct LineError {
  int line;
  std::string what;
};

double to_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (!s.empty() && *b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (s.empty() || ec != std::errc() || ptr != e || !std::isfinite(v)) throw LineError{0, "malformed number '" + s + "'"};
  return v;
}

long to_int(const std::string& s) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) throw LineError{0, "malformed integer '" + s + "'"};
  return v;
}

cplx to_complex(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() == 1) return {to_double(parts[0]), 0.0};
  if (parts.size() == 2) return {to_double(parts[0]), to_double(parts[1])};
  throw LineError{0, "malformed complex number '" + s + "'"};
}

std::vector<cplx> to_complex_list(const std::string& s) {
  std::vector<cplx> out;
  for (const auto& item : split(s, ';')) out.push_back(to_complex(item));
  return out;
}

std::vector<double> to_double_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ';')) out.push_back(to_double(item));
  return out;
}

std::string fmt_short(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string fmt_complex(cplx z) { return fmt_short(z.real()) + "," + fmt_short(z.imag()); }

template <typename T, typename F>
std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += "; ";
    out += f(v[i]);
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

Grid2D RunSpec::grid() const {
  const double h = 2.0 * L / (n - 1);
  return Grid2D(center.value_or(cplx(0.5 * h, 0.0)), L, n);
}

bool RunSpec::operator==(const RunSpec& o) const { return serialize(*this) == serialize(o); }

RunSpec parse_config(const std::string& text) {
  RunSpec s;
  std::map<std::string, int> seen;
  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"problem.p", [&](const std::string& v) { s.p = to_complex_list(v); }},
      {"problem.pdot", [&](const std::string& v) { s.pdot = to_complex_list(v); }},
      {"problem.chart", [&](const std::string& v) { s.chart = v; }},
      {"grid.L", [&](const std::string& v) { s.L = to_double(v); }},
      {"grid.n", [&](const std::string& v) { s.n = static_cast<int>(to_int(v)); }},
      {"grid.center",
       [&](const std::string& v) {
         if (v == "auto") s.center.reset();
         else s.center = to_complex(v);
       }},
      {"solver.newton_tol", [&](const std::string& v) { s.solver.newton_tol = to_double(v); }},
      {"solver.max_newton", [&](const std::string& v) { s.solver.max_newton = static_cast<int>(to_int(v)); }},
      {"solver.cg_rel_tol", [&](const std::string& v) { s.solver.cg_rel_tol = to_double(v); }},
      {"solver.cg_max_iters", [&](const std::string& v) { s.solver.cg_max_iters = static_cast<int>(to_int(v)); }},
      {"solver.armijo_c1", [&](const std::string& v) { s.solver.armijo_c1 = to_double(v); }},
      {"solver.backtrack", [&](const std::string& v) { s.solver.backtrack = to_double(v); }},
      {"solver.max_halvings", [&](const std::string& v) { s.solver.max_halvings = static_cast<int>(to_int(v)); }},
      {"experiment.fit_window",
       [&](const std::string& v) {
         if (v == "auto") {
           s.fit_window.reset();
           return;
         }
         const auto w = to_double_list(v);
         if (w.size() != 2) throw LineError{0, "fit_window needs two values 'r1; r2'"};
         s.fit_window = std::make_pair(w[0], w[1]);
       }},
      {"experiment.fit_bins", [&](const std::string& v) { s.fit_bins = static_cast<int>(to_int(v)); }},
      {"experiment.stencil", [&](const std::string& v) { s.stencil = static_cast<int>(to_int(v)); }},
      {"experiment.radii", [&](const std::string& v) { s.radii = to_double_list(v); }},
      {"experiment.chi",
       [&](const std::string& v) {
         if (v == "auto") s.chi.clear();
         else s.chi = to_complex_list(v);
       }},
      {"experiment.t_list", [&](const std::string& v) { s.t_list = to_double_list(v); }},
      {"experiment.near_rho", [&](const std::string& v) { s.near_rho = to_double(v); }},
      {"experiment.workers", [&](const std::string& v) { s.workers = static_cast<int>(to_int(v)); }},
      {"experiment.bessel_x", [&](const std::string& v) { s.bessel_x = to_double_list(v); }},
      {"output.fields",
       [&](const std::string& v) {
         s.fields.clear();
         if (v.empty() || v == "none") return;
         for (const auto& f : split(v, ';')) {
           if (std::find(kFieldNames.begin(), kFieldNames.end(), f) == kFieldNames.end())
             throw LineError{0, "unknown field '" + f + "'"};
           s.fields.push_back(f);
         }
       }},
  };

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto fail = [](int line, const std::string& what) {
    throw Error(ErrorKind::ConfigError, (line > 0 ? "line " + std::to_string(line) + ": " : "") + what);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected 'section.key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) fail(lineno, "unknown key '" + key + "'");
    if (seen.count(key)) fail(lineno, "duplicate key '" + key + "'");
    seen[key] = lineno;
    try {
      it->second(value);
    } catch (const LineError& e) {
      fail(lineno, e.what);
    }
  }

  auto check = [&](bool ok, const std::string& key, const std::string& what) {
    if (ok) return;
    const auto it = seen.find(key);
    fail(it == seen.end() ? 0 : it->second, key + ": " + what);
  };
  check(s.n >= 33 && s.n % 2 == 1, "grid.n", "must be odd and >= 33");
  check(s.L > 0.0, "grid.L", "must be positive");
  check(s.solver.newton_tol > 0.0, "solver.newton_tol", "must be positive");
  check(s.solver.max_newton > 0, "solver.max_newton", "must be positive");
  check(s.solver.cg_rel_tol > 0.0, "solver.cg_rel_tol", "must be positive");
  check(s.solver.cg_max_iters >= 0, "solver.cg_max_iters", "must be >= 0 (0 means 10 n^2)");
  check(s.solver.armijo_c1 > 0.0 && s.solver.armijo_c1 < 1.0, "solver.armijo_c1", "must lie in (0, 1)");
  check(s.solver.backtrack > 0.0 && s.solver.backtrack < 1.0, "solver.backtrack", "must lie in (0, 1)");
  check(s.solver.max_halvings > 0, "solver.max_halvings", "must be positive");
  check(!s.fit_window || s.fit_window->first < s.fit_window->second, "experiment.fit_window", "needs r1 < r2");
  check(s.fit_bins >= 8, "experiment.fit_bins", "must be >= 8");
  check(s.stencil == 8 || s.stencil == 16, "experiment.stencil", "must be 8 or 16");
  check(!s.radii.empty() && std::all_of(s.radii.begin(), s.radii.end(), [](double r) { return r > 0.0; }),
        "experiment.radii", "must be positive");
  bool inc = !s.t_list.empty() && s.t_list[0] > 0.0;
  for (std::size_t i = 1; i < s.t_list.size(); ++i) inc = inc && s.t_list[i] > s.t_list[i - 1];
  check(inc, "experiment.t_list", "must be positive and increasing");
  check(s.near_rho > 0.0, "experiment.near_rho", "must be positive");
  check(s.workers >= 1, "experiment.workers", "must be a positive integer");
  check(!s.bessel_x.empty(), "experiment.bessel_x", "must not be empty");
  try {
    const PolynomialQD p(s.p, s.chart);
    check(!p.is_zero(), "problem.p", "zero differential");
    PolynomialQD(s.pdot, s.chart);
    if (!s.chi.empty()) PolynomialVF(s.chi, s.chart);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    fail(0, e.what());
  }
  return s;
}

std::string serialize(const RunSpec& s) {
  std::ostringstream o;
  o << "problem.p = " << join(s.p, fmt_complex) << "\n";
  o << "problem.pdot = " << join(s.pdot, fmt_complex) << "\n";
  o << "problem.chart = " << s.chart << "\n";
  o << "grid.L = " << fmt_short(s.L) << "\n";
  o << "grid.n = " << s.n << "\n";
  o << "grid.center = " << (s.center ? fmt_complex(*s.center) : std::string("auto")) << "\n";
  o << "solver.newton_tol = " << fmt_short(s.solver.newton_tol) << "\n";
  o << "solver.max_newton = " << s.solver.max_newton << "\n";
  o << "solver.cg_rel_tol = " << fmt_short(s.solver.cg_rel_tol) << "\n";
  o << "solver.cg_max_iters = " << s.solver.cg_max_iters << "\n";
  o << "solver.armijo_c1 = " << fmt_short(s.solver.armijo_c1) << "\n";
  o << "solver.backtrack = " << fmt_short(s.solver.backtrack) << "\n";
  o << "solver.max_halvings = " << s.solver.max_halvings << "\n";
  o << "experiment.fit_window = "
    << (s.fit_window ? fmt_short(s.fit_window->first) + "; " + fmt_short(s.fit_window->second) : std::string("auto"))
    << "\n";
  o << "experiment.fit_bins = " << s.fit_bins << "\n";
  o << "experiment.stencil = " << s.stencil << "\n";
  o << "experiment.radii = " << join(s.radii, fmt_short) << "\n";
  o << "experiment.chi = " << (s.chi.empty() ? std::string("auto") : join(s.chi, fmt_complex)) << "\n";
  o << "experiment.t_list = " << join(s.t_list, fmt_short) << "\n";
  o << "experiment.near_rho = " << fmt_short(s.near_rho) << "\n";
  o << "experiment.workers = " << s.workers << "\n";
  o << "experiment.bessel_x = " << join(s.bessel_x, fmt_short) << "\n";
  o << "output.fields = " << (s.fields.empty() ? std::string("none") : join(s.fields, [](const std::string& f) {
                                return f;
                              })) << "\n";
  return o.str();
}

int effective_workers(const RunSpec& spec) {
  const char* env = std::getenv("HSLAB_THREADS");
  if (!env) return spec.workers;
  const std::string v = trim(env);
  long w = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), w);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || w < 1 || w > 4096)
    throw Error(ErrorKind::ConfigError, "HSLAB_THREADS must be a positive integer, got '" + v + "'");
  return static_cast<int>(w);
}

namespace {

class Csv {
 public:
  void header(const std::vector<std::string>& cols) { row(cols); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorKind::ConfigError, "write failed for " + path.string());
}

std::string field_csv(const ScalarField& f) {
  const Grid2D& g = f.grid();
  std::string out = "# n=" + std::to_string(g.n()) + ", L=" + format_double(g.half_width()) +
                    ", center=" + format_double(g.center().real()) + "," + format_double(g.center().imag()) + "\n";
  for (int k = 0; k < g.n(); ++k) {
    for (int j = 0; j < g.n(); ++j) {
      if (j) out += ',';
      out += format_double(f(j, k));
    }
    out += '\n';
  }
  return out;
}

std::string b(bool v) { return v ? "1" : "0"; }

struct Output {
  Csv report;
  std::map<std::string, ScalarField> fields;
  int status = kOk;
};

PolynomialVF stokes_chi(const RunSpec& spec, const PolynomialQD& p, const PolynomialQD& pdot) {
  if (!spec.chi.empty()) return PolynomialVF(spec.chi, spec.chart);
  if (p.degree() != 1 || p.coeffs()[0] != cplx{})
    throw Error(ErrorKind::ConfigError, "experiment.chi must be given unless problem.p = c z");
  return chi_for_variation(pdot, p.coeffs()[1]);
}

ScalarField w_field(const ScalarField& u, const PolynomialQD& p) {
  const ScalarField s = semiflat_logdensity(p, u.grid());
  ScalarField w(u.grid());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = u[i] - s[i];
  return w;
}

void want(const RunSpec& spec, Output& out, const std::string& name, const std::function<ScalarField()>& make) {
  if (std::find(spec.fields.begin(), spec.fields.end(), name) != spec.fields.end()) out.fields.emplace(name, make());
}

Output run_solve(const RunSpec& spec) {
  Output out;
  const Grid2D g = spec.grid();
  const PolynomialQD p(spec.p, spec.chart);
  const SolveResult sol = solve_u_unchecked({p, g}, spec.solver);
  const ScalarField w = w_field(sol.u, p);
  double min_w = HUGE_VAL;
  for (int k = 1; k < g.n() - 1; ++k)
    for (int j = 1; j < g.n() - 1; ++j) min_w = std::min(min_w, w(j, k));
  const cplx origin = 0.0;
  double u0 = std::nan("");
  try {
    u0 = bilinear_sample(sol.u, origin);
  } catch (const Error&) {
  }
  out.report.header({"iterations", "final_residual_inf", "energy", "converged", "u_origin", "min_w", "cg_iterations"});
  out.report.row({std::to_string(sol.report.iterations), format_double(sol.report.final_residual_inf),
                  format_double(sol.report.energy), b(sol.report.converged), format_double(u0), format_double(min_w),
                  std::to_string(sol.report.cg_iterations)});
  want(spec, out, "u", [&] { return sol.u; });
  want(spec, out, "w", [&] { return w; });
  want(spec, out, "r", [&] { return radius_field(p, g, static_cast<Stencil>(spec.stencil)); });
  if (!sol.report.converged) out.status = kConvergence;
  return out;
}

Output run_decay(const RunSpec& spec) {
  Output out;
  const Grid2D g = spec.grid();
  const PolynomialQD p(spec.p, spec.chart), pdot(spec.pdot, spec.chart);
  const SolveResult sol = solve_u({p, g}, spec.solver);
  const ScalarField r = radius_field(p, g, static_cast<Stencil>(spec.stencil));
  const auto window = spec.fit_window.value_or(default_fit_window(r));
  const ScalarField w = w_field(sol.u, p);

  ScalarField wabs(g), grad(g), fabs_(g);
  const auto [wx, wy] = gradient(w);
  for (std::size_t i = 0; i < g.size(); ++i) {
    wabs[i] = std::abs(w[i]);
    grad[i] = std::hypot(wx[i], wy[i]) / std::sqrt(std::abs(eval_qd(p, g.node(i))));
  }
  // One-sided ring derivatives are excluded from the C1 fit.
  for (int k = 0; k < g.n(); ++k)
    for (int j = 0; j < g.n(); ++j)
      if (j < 2 || k < 2 || j > g.n() - 3 || k > g.n() - 3) grad(j, k) = std::nan("");
  const ComplexField F = solve_F(p, pdot, sol.u, spec.solver);
  const ComplexField sF = semiflat_F(p, pdot, g);
  for (std::size_t i = 0; i < g.size(); ++i) fabs_[i] = std::abs(F[i] - sF[i]);

  out.report.header({"quantity", "gamma", "log_amplitude", "r_min", "r_max", "rms_log_residual", "samples"});
  auto put = [&](const std::string& name, const ScalarField& f) {
    const DecayFit fit = envelope_fit(f, r, window, spec.fit_bins);
    out.report.row({name, format_double(fit.gamma), format_double(fit.log_amplitude), format_double(fit.r_min),
                    format_double(fit.r_max), format_double(fit.rms_log_residual), std::to_string(fit.samples)});
  };
  put("u", wabs);
  put("grad_u", grad);
  put("F", fabs_);
  want(spec, out, "u", [&] { return sol.u; });
  want(spec, out, "w", [&] { return w; });
  want(spec, out, "r", [&] { return r; });
  want(spec, out, "F_re", [&] {
    ScalarField x(g);
    for (std::size_t i = 0; i < g.size(); ++i) x[i] = F[i].real();
    return x;
  });
  want(spec, out, "F_im", [&] {
    ScalarField x(g);
    for (std::size_t i = 0; i < g.size(); ++i) x[i] = F[i].imag();
    return x;
  });
  want(spec, out, "delta", [&] { return delta_field(p, pdot, sol.u, F); });
  return out;
}

Output run_stokes(const RunSpec& spec) {
  Output out;
  const Grid2D g = spec.grid();
  const PolynomialQD p(spec.p, spec.chart), pdot(spec.pdot, spec.chart);
  const PolynomialVF chi = stokes_chi(spec, p, pdot);
  const SolveResult sol = solve_u({p, g}, spec.solver);
  const ComplexField u_z = dz(sol.u);
  out.report.header({"rho", "int_delta", "beta", "residual", "scale", "relative"});
  for (double rho : spec.radii) {
    const StokesResult s = stokes_residual(p, chi, sol.u, u_z, Disk{cplx(0.0, 0.0), rho});
    out.report.row({format_double(rho), format_double(s.int_delta), format_double(s.beta), format_double(s.residual),
                    format_double(s.scale), format_double(s.relative())});
  }
  want(spec, out, "u", [&] { return sol.u; });
  want(spec, out, "w", [&] { return w_field(sol.u, p); });
  return out;
}

Output run_ray(const RunSpec& spec, int workers) {
  Output out;
  const PolynomialQD p0(spec.p, spec.chart), pdot(spec.pdot, spec.chart);
  RayGeometry geo;
  geo.half_width = spec.L;
  geo.n = spec.n;
  geo.center = spec.center;
  geo.near_rho = spec.near_rho;
  const auto rows = ray_scan(p0, pdot, spec.t_list, geo, spec.solver, workers);
  out.report.header({"t", "R", "g", "gsf", "diff", "near_integral", "beta_boundary", "stokes_residual", "mu_max",
                     "iterations", "final_residual", "converged", "failed"});
  bool any_failed = false;
  for (const RayRow& r : rows) {
    out.report.row({format_double(r.t), format_double(r.R), format_double(r.g_value), format_double(r.gsf_value),
                    format_double(r.diff), format_double(r.near_integral), format_double(r.beta_boundary),
                    format_double(r.stokes_residual), format_double(r.mu_max), std::to_string(r.iterations),
                    format_double(r.final_residual), b(r.converged), b(r.failed)});
    any_failed = any_failed || r.failed;
  }
  const RaySlope sl = ray_slope(rows);
  out.report.row({"slope", format_double(sl.slope), "corrected_slope", format_double(sl.corrected), "points",
                  std::to_string(sl.points)});
  if (any_failed) out.status = kConvergence;
  return out;
}

Output run_bessel(const RunSpec& spec) {
  Output out;
  out.report.header({"x", "i0", "i0_scaled"});
  for (double x : spec.bessel_x) {
    const double ax = std::abs(x);
    out.report.row({format_double(x), ax <= 700.0 ? format_double(i0(x)) : std::string("inf"),
                    format_double(i0_scaled(ax))});
  }
  return out;
}

void write_outputs(const std::string& subcommand, const RunSpec& spec, const std::filesystem::path& dir,
                   const Output& out, int status) {
  std::filesystem::create_directories(dir);
  write_file(dir / "report.csv", out.report.text());
  for (const auto& [name, f] : out.fields) write_file(dir / ("field_" + name + ".csv"), field_csv(f));
  std::string meta = "version = " + std::string(kVersion) + "\nsubcommand = " + subcommand +
                     "\nexit_status = " + std::to_string(status) + "\n" + serialize(spec);
  write_file(dir / "meta.txt", meta);
}

int status_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::ConfigError: return kConfig;
    case ErrorKind::ConvergenceFailure: return kConvergence;
    default: return kValidation;
  }
}

}  // namespace

int run(const std::string& subcommand, const RunSpec& spec, const std::string& out_dir, bool quiet) {
  int workers = 1;
  try {
    workers = effective_workers(spec);
  } catch (const Error& e) {
    if (!quiet) std::cerr << e.what() << "\n";
    return kConfig;
  }
  omp_set_num_threads(workers);

  Output out;
  try {
    if (subcommand == "solve") out = run_solve(spec);
    else if (subcommand == "decay") out = run_decay(spec);
    else if (subcommand == "stokes") out = run_stokes(spec);
    else if (subcommand == "ray") out = run_ray(spec, workers);
    else if (subcommand == "bessel") out = run_bessel(spec);
    else throw Error(ErrorKind::ConfigError, "unknown subcommand '" + subcommand + "'");
  } catch (const Error& e) {
    if (!quiet) std::cerr << e.what() << "\n";
    const int status = status_for(e);
    if (status != kConfig) {
      // Failure still leaves a report and meta behind.
      Output fail;
      fail.report.header({"error"});
      fail.report.row({std::string(to_string(e.kind()))});
      try {
        write_outputs(subcommand, spec, out_dir, fail, status);
      } catch (const std::exception&) {
      }
    }
    return status;
  }
  try {
    write_outputs(subcommand, spec, out_dir, out, out.status);
  } catch (const std::exception& e) {
    if (!quiet) std::cerr << e.what() << "\n";
    return kConfig;
  }
  if (!quiet) std::cout << out.report.text();
  return out.status;
}

}  // namespace hslab::cli
