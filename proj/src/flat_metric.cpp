#include "hslab/flat_metric.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "hslab/error.hpp"

namespace hslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Seed {
  std::size_t node;
  double value;
};

std::vector<Zero> zeros_in_hull(const PolynomialQD& p, const Grid2D& g) {
  if (p.is_zero()) throw Error(ErrorKind::ZeroDifferential, "flat metric of the zero differential");
  std::vector<Zero> out;
  for (const Zero& z : find_zeros(p)) {
    const cplx rel = z.location - g.center();
    if (std::abs(rel.real()) <= g.half_width() && std::abs(rel.imag()) <= g.half_width()) out.push_back(z);
  }
  if (out.empty()) throw Error(ErrorKind::NoZeros, "no zero of P inside the chart");
  return out;
}

std::vector<Seed> seeds_for(const PolynomialQD& p, const Grid2D& g, const Zero& z0) {
  const double rad = 2.0 * g.h();
  const cplx rel = z0.location - g.center();
  const int n = g.n();
  const int jc = static_cast<int>(std::lround((rel.real() + g.half_width()) / g.h()));
  const int kc = static_cast<int>(std::lround((rel.imag() + g.half_width()) / g.h()));
  std::vector<Seed> out;
  for (int k = std::max(0, kc - 3); k <= std::min(n - 1, kc + 3); ++k)
    for (int j = std::max(0, jc - 3); j <= std::min(n - 1, jc + 3); ++j) {
      const cplx z = g.node(j, k);
      if (std::abs(z - z0.location) <= rad) out.push_back({g.index(j, k), local_zero_distance(p, z0, z)});
    }
  return out;
}

std::vector<double> dijkstra(const Grid2D& g, const std::vector<double>& weight, Stencil stencil,
                             const std::vector<Seed>& seeds) {
  static const int off8[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  static const int off16[8][2] = {{1, 2}, {2, 1}, {-1, 2}, {-2, 1}, {1, -2}, {2, -1}, {-1, -2}, {-2, -1}};
  const int n = g.n();
  const double h = g.h();
  std::vector<double> dist(g.size(), kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (const Seed& s : seeds) {
    if (s.value < dist[s.node]) {
      dist[s.node] = s.value;
      pq.push({s.value, s.node});
    }
  }
  auto relax = [&](std::size_t from, int j, int k, int dj, int dk) {
    const int jj = j + dj, kk = k + dk;
    if (jj < 0 || kk < 0 || jj >= n || kk >= n) return;
    const std::size_t to = g.index(jj, kk);
    const double len = h * std::sqrt(static_cast<double>(dj * dj + dk * dk));
    const double cand = dist[from] + 0.5 * (weight[from] + weight[to]) * len;
    if (cand < dist[to]) {
      dist[to] = cand;
      pq.push({cand, to});
    }
  };
  while (!pq.empty()) {
    const auto [d, i] = pq.top();
    pq.pop();
    if (d > dist[i]) continue;
    const int j = static_cast<int>(i % static_cast<std::size_t>(n));
    const int k = static_cast<int>(i / static_cast<std::size_t>(n));
    for (const auto& o : off8) relax(i, j, k, o[0], o[1]);
    if (stencil == Stencil::Sixteen)
      for (const auto& o : off16) relax(i, j, k, o[0], o[1]);
  }
  return dist;
}

std::vector<double> metric_weight(const PolynomialQD& p, const Grid2D& g) {
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) w[i] = std::sqrt(std::abs(eval_qd(p, g.node(i))));
  return w;
}

}  // namespace

double local_zero_distance(const PolynomialQD& p, const Zero& z0, cplx z) {
  const int m = z0.multiplicity;
  double fact = 1.0;
  for (int i = 2; i <= m; ++i) fact *= i;
  const double a = std::abs(p.derivative(z0.location, m)) / fact;
  const double e = 0.5 * m + 1.0;
  return std::sqrt(a) * std::pow(std::abs(z - z0.location), e) / e;
}

ScalarField radius_field(const PolynomialQD& p, const Grid2D& g, Stencil stencil) {
  const auto zeros = zeros_in_hull(p, g);
  std::vector<Seed> seeds;
  for (const Zero& z : zeros) {
    auto s = seeds_for(p, g, z);
    seeds.insert(seeds.end(), s.begin(), s.end());
  }
  return ScalarField(g, dijkstra(g, metric_weight(p, g), stencil, seeds));
}

std::optional<double> threshold(const PolynomialQD& p, const Grid2D& g, Stencil stencil) {
  const auto zeros = zeros_in_hull(p, g);
  if (zeros.size() < 2) return std::nullopt;
  const auto weight = metric_weight(p, g);
  double best = kInf;
  for (std::size_t a = 0; a < zeros.size(); ++a) {
    const auto dist = dijkstra(g, weight, stencil, seeds_for(p, g, zeros[a]));
    for (std::size_t b = 0; b < zeros.size(); ++b) {
      if (b == a) continue;
      for (const Seed& s : seeds_for(p, g, zeros[b])) best = std::min(best, dist[s.node] + s.value);
    }
  }
  return best;
}

}  // namespace hslab
