#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hslab/grid.hpp"
#include "hslab/selfduality.hpp"

namespace hslab::cli {

inline constexpr const char* kVersion = "1.0.0";

struct RunSpec {
  // problem
  std::vector<cplx> p{cplx(0, 0), cplx(1, 0)};
  std::vector<cplx> pdot{cplx(1, 0)};
  std::string chart = "z";
  // grid
  double L = 6.0;
  int n = 257;
  std::optional<cplx> center;  // unset: (h/2, 0)
  // solver
  SolveConfig solver;
  // experiment
  std::optional<std::pair<double, double>> fit_window;  // unset: analysis default
  int fit_bins = 16;
  int stencil = 16;
  std::vector<double> radii{4.0};
  std::vector<cplx> chi;  // empty: derived from pdot when P = c z
  std::vector<double> t_list{1.0, 2.0, 4.0, 8.0};
  double near_rho = 1.5;
  int workers = 1;
  std::vector<double> bessel_x{0.0, 0.5, 1.0, 2.0, 5.0, 12.0, 20.0, 40.0, 100.0};
  // output
  std::vector<std::string> fields;

  Grid2D grid() const;
  bool operator==(const RunSpec& o) const;
};

// `section.key = value` lines, `#` comments, complex numbers `re,im`,
// lists separated by `;`. Throws ConfigError naming the offending line.
RunSpec parse_config(const std::string& text);

// Canonical text; parse_config(serialize(s)) == s.
std::string serialize(const RunSpec& spec);

enum ExitCode { kOk = 0, kConfig = 1, kConvergence = 2, kValidation = 3 };

// Runs a subcommand and writes report.csv, meta.txt and requested field dumps into out_dir.
int run(const std::string& subcommand, const RunSpec& spec, const std::string& out_dir, bool quiet);

// experiment.workers unless HSLAB_THREADS is set (positive integer).
int effective_workers(const RunSpec& spec);

std::string format_double(double x);

}  // namespace hslab::cli
