#pragma once

#include <utility>
#include <vector>

#include "hslab/grid.hpp"

namespace hslab {

struct DecayFit {
  double gamma = 0.0;
  double log_amplitude = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  double rms_log_residual = 0.0;
  int samples = 0;  // bins that entered the regression
};

// Bin samples with r in [r1, r2] uniformly, keep the per-bin maximum of w
// (placed at the r of the maximising sample), and fit
// log max = log A - gamma r by least squares. Bins whose max is 0 are
// dropped; fewer than 5 remaining bins is a FitError.
DecayFit envelope_fit(const std::vector<double>& r, const std::vector<double>& w_abs, std::pair<double, double> window,
                      int bins = 16);
DecayFit envelope_fit(const ScalarField& w_abs, const ScalarField& r, std::pair<double, double> window, int bins = 16);

// [0.4, 0.85] times the largest finite interior r.
std::pair<double, double> default_fit_window(const ScalarField& r);

struct ComparisonResult {
  bool holds = true;
  double max_ratio = 0.0;
};

// Checks w_abs <= B I_0(gamma |z - center|) at every interior node in the disk of radius R.
ComparisonResult comparison_check(const ScalarField& w_abs, cplx center, double gamma, double R, double B);

// Max over the disk's nodes whose four neighbours are all in the disk, against the max
// over the remaining disk nodes (the discrete boundary ring), with 1e-10 relative slack.
bool boundary_max_check(const ScalarField& f_abs, const Disk& disk);

}  // namespace hslab
