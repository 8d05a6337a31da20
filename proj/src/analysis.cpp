#include "hslab/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "hslab/bessel.hpp"
#include "hslab/error.hpp"

namespace hslab {

DecayFit envelope_fit(const std::vector<double>& r, const std::vector<double>& w_abs, std::pair<double, double> window,
                      int bins) {
  const auto [r1, r2] = window;
  if (!(r1 < r2)) throw Error(ErrorKind::FitError, "fit window needs r_min < r_max");
  if (bins < 8) throw Error(ErrorKind::FitError, "envelope fit needs at least 8 bins");
  if (r.size() != w_abs.size()) throw Error(ErrorKind::FitError, "radius and value arrays differ in length");

  std::vector<double> best(static_cast<std::size_t>(bins), -1.0), at(static_cast<std::size_t>(bins), 0.0);
  const double width = (r2 - r1) / bins;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double ri = r[i], wi = w_abs[i];
    if (!std::isfinite(ri) || !std::isfinite(wi) || ri < r1 || ri > r2) continue;
    if (wi < 0.0) throw Error(ErrorKind::DomainError, "envelope fit of a negative value");
    const int b = std::min(bins - 1, static_cast<int>((ri - r1) / width));
    auto& m = best[static_cast<std::size_t>(b)];
    if (wi > m) {
      m = wi;
      at[static_cast<std::size_t>(b)] = ri;
    }
  }
  std::vector<double> xs, ys;
  for (int b = 0; b < bins; ++b) {
    if (best[static_cast<std::size_t>(b)] > 0.0) {
      xs.push_back(at[static_cast<std::size_t>(b)]);
      ys.push_back(std::log(best[static_cast<std::size_t>(b)]));
    }
  }
  const auto m = static_cast<double>(xs.size());
  if (xs.size() < 5) throw Error(ErrorKind::FitError, "fewer than 5 usable bins in the fit window");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::FitError, "all bin maxima at one radius");
  const double slope = sxy / sxx;
  DecayFit fit;
  fit.gamma = -slope;
  fit.log_amplitude = my - slope * mx;
  fit.r_min = r1;
  fit.r_max = r2;
  fit.samples = static_cast<int>(xs.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.log_amplitude + slope * xs[i]);
    ss += e * e;
  }
  fit.rms_log_residual = std::sqrt(ss / m);
  return fit;
}

DecayFit envelope_fit(const ScalarField& w_abs, const ScalarField& r, std::pair<double, double> window, int bins) {
  if (!(w_abs.grid() == r.grid())) throw Error(ErrorKind::FitError, "fields live on different grids");
  const Grid2D& g = r.grid();
  std::vector<double> rs, ws;
  for (int k = 1; k < g.n() - 1; ++k)
    for (int j = 1; j < g.n() - 1; ++j) {
      rs.push_back(r(j, k));
      ws.push_back(w_abs(j, k));
    }
  return envelope_fit(rs, ws, window, bins);
}

std::pair<double, double> default_fit_window(const ScalarField& r) {
  double m = 0.0;
  const int n = r.grid().n();
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j)
      if (std::isfinite(r(j, k))) m = std::max(m, r(j, k));
  return {0.4 * m, 0.85 * m};
}

ComparisonResult comparison_check(const ScalarField& w_abs, cplx center, double gamma, double R, double B) {
  if (!(gamma > 0.0 && gamma < 4.0)) throw Error(ErrorKind::DomainError, "comparison rate must lie in (0, 4)");
  const Grid2D& g = w_abs.grid();
  check_disk_inside(g, center, R);
  ComparisonResult out;
  const int n = g.n();
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j) {
      const double d = std::abs(g.node(j, k) - center);
      if (d > R) continue;
      const double w = w_abs(j, k);
      const double v = B * i0(gamma * d);
      if (w > v) out.holds = false;
      if (w > 0.0) out.max_ratio = std::max(out.max_ratio, v > 0.0 ? w / v : HUGE_VAL);
    }
  return out;
}

bool boundary_max_check(const ScalarField& f_abs, const Disk& disk) {
  const Grid2D& g = f_abs.grid();
  check_disk_inside(g, disk.center, disk.radius);
  const int n = g.n();
  auto in = [&](int j, int k) { return std::abs(g.node(j, k) - disk.center) <= disk.radius; };
  double inner = 0.0, ring = 0.0;
  bool any_ring = false;
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j) {
      if (!in(j, k)) continue;
      const double v = std::abs(f_abs(j, k));
      if (in(j + 1, k) && in(j - 1, k) && in(j, k + 1) && in(j, k - 1)) {
        inner = std::max(inner, v);
      } else {
        ring = std::max(ring, v);
        any_ring = true;
      }
    }
  if (!any_ring) throw Error(ErrorKind::RegionOutOfBounds, "disk holds no grid nodes");
  const double scale = std::max(inner, ring);
  return inner <= ring + 1e-10 * scale;
}

}  // namespace hslab
