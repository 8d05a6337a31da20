#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

namespace hslab {

using cplx = std::complex<double>;

// Vertex-centred square chart. Node (j,k) sits at
// center + (-L + j h) + i(-L + k h); storage is row-major, index k*n + j.
class Grid2D {
 public:
  Grid2D(cplx center, double half_width, int n);

  cplx center() const noexcept { return center_; }
  double half_width() const noexcept { return L_; }
  int n() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }

  cplx node(int j, int k) const noexcept { return center_ + cplx(-L_ + j * h_, -L_ + k * h_); }
  cplx node(std::size_t idx) const noexcept {
    return node(static_cast<int>(idx % static_cast<std::size_t>(n_)), static_cast<int>(idx / static_cast<std::size_t>(n_)));
  }
  std::size_t index(int j, int k) const noexcept {
    return static_cast<std::size_t>(k) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }
  bool is_boundary(int j, int k) const noexcept { return j == 0 || k == 0 || j == n_ - 1 || k == n_ - 1; }

  bool operator==(const Grid2D&) const = default;

 private:
  cplx center_;
  double L_;
  int n_;
  double h_;
};

template <typename T>
class Field {
 public:
  explicit Field(const Grid2D& g, T fill = T{}) : grid_(g), v_(g.size(), fill) {}
  Field(const Grid2D& g, std::vector<T> values);

  const Grid2D& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return v_.size(); }
  T& operator()(int j, int k) { return v_[grid_.index(j, k)]; }
  const T& operator()(int j, int k) const { return v_[grid_.index(j, k)]; }
  T& operator[](std::size_t i) { return v_[i]; }
  const T& operator[](std::size_t i) const { return v_[i]; }
  T* data() noexcept { return v_.data(); }
  const T* data() const noexcept { return v_.data(); }
  std::vector<T>& values() noexcept { return v_; }
  const std::vector<T>& values() const noexcept { return v_; }

 private:
  Grid2D grid_;
  std::vector<T> v_;
};

using ScalarField = Field<double>;
using ComplexField = Field<cplx>;

// f(z) sampled at every node.
ScalarField sample(const Grid2D& g, const std::function<double(cplx)>& f);
ComplexField sample_complex(const Grid2D& g, const std::function<cplx(cplx)>& f);

// 5-point Laplacian; boundary ring is NaN.
ScalarField laplacian(const ScalarField& f);
ComplexField laplacian(const ComplexField& f);

// Max |f| over interior nodes.
double interior_max_abs(const ScalarField& f);
double interior_max_abs(const ComplexField& f);

// Central differences inside, second-order one-sided on the ring.
std::pair<ScalarField, ScalarField> gradient(const ScalarField& f);

// d/dz = (d/dx - i d/dy)/2 from gradient().
ComplexField dz(const ScalarField& f);

struct WholeInterior {};
struct Disk {
  cplx center;
  double radius;
};
struct Annulus {
  cplx center;
  double inner;
  double outer;
};

struct Region {
  std::variant<WholeInterior, Disk, Annulus> shape = WholeInterior{};
  std::vector<Disk> exclusions;

  bool contains(cplx z) const;
};

// Interior nodes selected by region (boundary ring never included).
std::vector<unsigned char> region_mask(const Grid2D& g, const Region& region);

// h^2 * sum of density over the region nodes, fixed pairwise order.
// Throws RegionOutOfBounds if the region leaves the interior hull.
double integrate_region(const ScalarField& density, const Region& region);

// Same, with the node set supplied directly.
double integrate_mask(const ScalarField& density, const std::vector<unsigned char>& mask);

void check_disk_inside(const Grid2D& g, cplx center, double radius);

// Trapezoid rule for the counterclockwise line integral of
// omega_x dx + omega_y dy over the circle |z - center| = rho.
using OneForm = std::function<std::pair<double, double>(cplx)>;
double circle_integral(const OneForm& omega, cplx center, double rho, int m);

// Same for a complex form f(z) dz; returns the complex line integral.
cplx circle_integral_dz(const std::function<cplx(cplx)>& f, cplx center, double rho, int m);

int default_circle_samples(const Grid2D& g, double rho);

double bilinear_sample(const ScalarField& f, cplx z);
cplx bilinear_sample(const ComplexField& f, cplx z);

}  // namespace hslab
