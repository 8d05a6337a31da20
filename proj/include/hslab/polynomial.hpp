#pragma once

// Polynomial quadratic differentials P(z) dz^2 and holomorphic vector fields
// chi(z) d/dz in a single fixed chart.

#include <complex>
#include <string>
#include <vector>

namespace hslab {

using cplx = std::complex<double>;

inline constexpr int kDefaultMaxDegree = 16;

namespace detail {

// Shared storage for the two polynomial kinds. Trailing coefficients below
// 1e-14 * max|a_n| are trimmed on construction.
class Polynomial {
 public:
  Polynomial(std::vector<cplx> coeffs, std::string chart_label, int max_degree);

  const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
  const std::string& chart_label() const noexcept { return chart_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept;

  // order-th complex derivative at z, any order >= 0.
  cplx derivative(cplx z, int order) const;

  bool operator==(const Polynomial&) const = default;

 private:
  std::vector<cplx> coeffs_;
  std::string chart_;
};

}  // namespace detail

class PolynomialQD : public detail::Polynomial {
 public:
  explicit PolynomialQD(std::vector<cplx> coeffs, std::string chart_label = "chart",
                        int max_degree = kDefaultMaxDegree)
      : Polynomial(std::move(coeffs), std::move(chart_label), max_degree) {}

  PolynomialQD scaled(cplx factor) const;
};

class PolynomialVF : public detail::Polynomial {
 public:
  explicit PolynomialVF(std::vector<cplx> coeffs, std::string chart_label = "chart",
                        int max_degree = kDefaultMaxDegree)
      : Polynomial(std::move(coeffs), std::move(chart_label), max_degree) {}
};

struct Zero {
  cplx location;
  bool simple = true;
  int multiplicity = 1;
};

// P, P_z or P_zz at z. Throws DomainError for order outside {0,1,2}.
cplx eval_qd(const PolynomialQD& p, cplx z, int order = 0);
cplx eval_vf(const PolynomialVF& chi, cplx z, int order = 0);

// All roots, sorted by (real, imag). Roots closer than 1e-6 are merged and
// flagged non-simple.
std::vector<Zero> find_zeros(const PolynomialQD& p);

// psi_X = L_X(P dz^2) = (chi P_z + 2 chi_z P) dz^2, exact coefficient arithmetic.
PolynomialQD lie_derivative(const PolynomialVF& chi, const PolynomialQD& p);

// The unique polynomial chi with L_X(c z dz^2) = Pdot dz^2:
// b_n = a_n / (c (2n + 1)).
PolynomialVF chi_for_variation(const PolynomialQD& pdot, cplx c);

}  // namespace hslab
