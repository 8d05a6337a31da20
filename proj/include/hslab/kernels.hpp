#pragma once

// Data-parallel inner loops on n x n row-major node arrays. Every reduction
// sums each row pairwise and then the row sums pairwise, so the result does
// not depend on the OpenMP thread count. The reference namespace holds
// serial twins used to check that.

#include <cstddef>

namespace hslab::kernels {

double pairwise_sum(const double* x, std::size_t count);

// (f_E + f_W + f_N + f_S - 4 f) / h^2 inside; NaN on the ring.
void laplacian(int n, double h, const double* f, double* out);

// y = (-Delta_h + k) x on interior nodes, treating the ring of x as zero;
// y is zero on the ring.
void apply_shifted(int n, double h, const double* k, const double* x, double* y);

// Sums over interior nodes only.
double interior_dot(int n, const double* a, const double* b);
double interior_max_abs(int n, const double* a);

// Sum of f over nodes with mask != 0 (whole array).
double masked_sum(int n, const double* f, const unsigned char* mask);

// y += a x
void axpy(std::size_t count, double a, const double* x, double* y);
// y = x + b y
void xpby(std::size_t count, const double* x, double b, double* y);
// z = x * y elementwise
void multiply(std::size_t count, const double* x, const double* y, double* z);

namespace reference {

void laplacian(int n, double h, const double* f, double* out);
void apply_shifted(int n, double h, const double* k, const double* x, double* y);
double interior_dot(int n, const double* a, const double* b);
double interior_max_abs(int n, const double* a);
double masked_sum(int n, const double* f, const unsigned char* mask);
void axpy(std::size_t count, double a, const double* x, double* y);
void xpby(std::size_t count, const double* x, double b, double* y);
void multiply(std::size_t count, const double* x, const double* y, double* z);

}  // namespace reference

}  // namespace hslab::kernels
