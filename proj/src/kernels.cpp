#include "hslab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hslab::kernels {

double pairwise_sum(const double* x, std::size_t count) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += x[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, count - half);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline std::size_t at(int n, int j, int k) {
  return static_cast<std::size_t>(k) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
}

// Row sums of interior rows are written by the caller; this folds them.
inline double fold_rows(const std::vector<double>& rows) { return pairwise_sum(rows.data(), rows.size()); }

}  // namespace

void laplacian(int n, double h, const double* f, double* out) {
  const double inv = 1.0 / (h * h);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      if (j == 0 || k == 0 || j == n - 1 || k == n - 1) {
        out[at(n, j, k)] = kNaN;
        continue;
      }
      const double c = f[at(n, j, k)];
      out[at(n, j, k)] =
          (f[at(n, j + 1, k)] + f[at(n, j - 1, k)] + f[at(n, j, k + 1)] + f[at(n, j, k - 1)] - 4.0 * c) * inv;
    }
  }
}

void apply_shifted(int n, double h, const double* k, const double* x, double* y) {
  const double inv = 1.0 / (h * h);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < n; ++j) {
      const std::size_t i = at(n, j, r);
      if (j == 0 || r == 0 || j == n - 1 || r == n - 1) {
        y[i] = 0.0;
        continue;
      }
      const double e = j + 1 < n - 1 ? x[i + 1] : 0.0;
      const double w = j - 1 > 0 ? x[i - 1] : 0.0;
      const double no = r + 1 < n - 1 ? x[i + static_cast<std::size_t>(n)] : 0.0;
      const double so = r - 1 > 0 ? x[i - static_cast<std::size_t>(n)] : 0.0;
      y[i] = (4.0 * x[i] - e - w - no - so) * inv + k[i] * x[i];
    }
  }
}

double interior_dot(int n, const double* a, const double* b) {
  if (n < 3) return 0.0;
  std::vector<double> rows(static_cast<std::size_t>(n - 2));
#pragma omp parallel
  {
    std::vector<double> buf(static_cast<std::size_t>(n - 2));
#pragma omp for schedule(static)
    for (int k = 1; k < n - 1; ++k) {
      for (int j = 1; j < n - 1; ++j) buf[static_cast<std::size_t>(j - 1)] = a[at(n, j, k)] * b[at(n, j, k)];
      rows[static_cast<std::size_t>(k - 1)] = pairwise_sum(buf.data(), buf.size());
    }
  }
  return fold_rows(rows);
}

double interior_max_abs(int n, const double* a) {
  double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j) m = std::max(m, std::abs(a[at(n, j, k)]));
  return m;
}

double masked_sum(int n, const double* f, const unsigned char* mask) {
  std::vector<double> rows(static_cast<std::size_t>(n));
#pragma omp parallel
  {
    std::vector<double> buf(static_cast<std::size_t>(n));
#pragma omp for schedule(static)
    for (int k = 0; k < n; ++k) {
      std::size_t c = 0;
      for (int j = 0; j < n; ++j)
        if (mask[at(n, j, k)]) buf[c++] = f[at(n, j, k)];
      rows[static_cast<std::size_t>(k)] = pairwise_sum(buf.data(), c);
    }
  }
  return fold_rows(rows);
}

void axpy(std::size_t count, double a, const double* x, double* y) {
  const auto m = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i) y[i] += a * x[i];
}

void xpby(std::size_t count, const double* x, double b, double* y) {
  const auto m = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i) y[i] = x[i] + b * y[i];
}

void multiply(std::size_t count, const double* x, const double* y, double* z) {
  const auto m = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i) z[i] = x[i] * y[i];
}

namespace reference {

void laplacian(int n, double h, const double* f, double* out) {
  const double inv = 1.0 / (h * h);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      if (j == 0 || k == 0 || j == n - 1 || k == n - 1) {
        out[at(n, j, k)] = kNaN;
      } else {
        out[at(n, j, k)] = (f[at(n, j + 1, k)] + f[at(n, j - 1, k)] + f[at(n, j, k + 1)] + f[at(n, j, k - 1)] -
                            4.0 * f[at(n, j, k)]) *
                           inv;
      }
    }
}

void apply_shifted(int n, double h, const double* k, const double* x, double* y) {
  const double inv = 1.0 / (h * h);
  auto val = [&](int j, int r) { return (j <= 0 || r <= 0 || j >= n - 1 || r >= n - 1) ? 0.0 : x[at(n, j, r)]; };
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < n; ++j) {
      const std::size_t i = at(n, j, r);
      if (j == 0 || r == 0 || j == n - 1 || r == n - 1) {
        y[i] = 0.0;
      } else {
        y[i] = (4.0 * x[i] - val(j + 1, r) - val(j - 1, r) - val(j, r + 1) - val(j, r - 1)) * inv + k[i] * x[i];
      }
    }
}

double interior_dot(int n, const double* a, const double* b) {
  if (n < 3) return 0.0;
  std::vector<double> rows;
  std::vector<double> buf;
  for (int k = 1; k < n - 1; ++k) {
    buf.clear();
    for (int j = 1; j < n - 1; ++j) buf.push_back(a[at(n, j, k)] * b[at(n, j, k)]);
    rows.push_back(pairwise_sum(buf.data(), buf.size()));
  }
  return pairwise_sum(rows.data(), rows.size());
}

double interior_max_abs(int n, const double* a) {
  double m = 0.0;
  for (int k = 1; k < n - 1; ++k)
    for (int j = 1; j < n - 1; ++j) m = std::max(m, std::abs(a[at(n, j, k)]));
  return m;
}

double masked_sum(int n, const double* f, const unsigned char* mask) {
  std::vector<double> rows;
  std::vector<double> buf;
  for (int k = 0; k < n; ++k) {
    buf.clear();
    for (int j = 0; j < n; ++j)
      if (mask[at(n, j, k)]) buf.push_back(f[at(n, j, k)]);
    rows.push_back(pairwise_sum(buf.data(), buf.size()));
  }
  return pairwise_sum(rows.data(), rows.size());
}

void axpy(std::size_t count, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < count; ++i) y[i] += a * x[i];
}

void xpby(std::size_t count, const double* x, double b, double* y) {
  for (std::size_t i = 0; i < count; ++i) y[i] = x[i] + b * y[i];
}

void multiply(std::size_t count, const double* x, const double* y, double* z) {
  for (std::size_t i = 0; i < count; ++i) z[i] = x[i] * y[i];
}

}  // namespace reference

}  // namespace hslab::kernels
