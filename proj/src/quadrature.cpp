#include "starwave/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "starwave/network.hpp"

namespace starwave {

namespace {

// P_m(z) and P_m'(z) by the three-term recurrence.
std::pair<double, double> legendre(int m, double z) {
  double p0 = 1.0;
  double p1 = z;
  for (int k = 2; k <= m; ++k) {
    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, m * (z * p1 - p0) / (z * z - 1.0)};
}

GaussLegendre compute_gauss_legendre(int m) {
  GaussLegendre gl{Eigen::VectorXd(m), Eigen::VectorXd(m)};
  if (m == 1) {
    gl.nodes(0) = 0.0;
    gl.weights(0) = 2.0;
    return gl;
  }
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(m, z);
      const double step = p / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double dp = legendre(m, z).second;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    gl.nodes(i) = -z;
    gl.nodes(m - 1 - i) = z;
    gl.weights(i) = w;
    gl.weights(m - 1 - i) = w;
  }
  return gl;
}

}  // namespace

const GaussLegendre& gauss_legendre(int m) {
  if (m < 1) throw Error("Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, compute_gauss_legendre(m)).first;
  return it->second;
}

QuadratureRule::QuadratureRule(const SpatialGrid& grid, QuadratureKind kind)
    : kind_(kind), grid_(grid) {
  for (const auto& g : grid_) {
    const Index count = g.samples();
    const Index intervals = count - 1;
    VectorXd w = VectorXd::Zero(count);
    const double h = g.dx;
    if (intervals < 1) throw Error("branch grid needs at least 2 samples");
    if (kind_ == QuadratureKind::trapezoid || intervals == 1) {
      w.setConstant(h);
      w(0) = w(intervals) = 0.5 * h;
    } else {
      // Simpson on an even number of intervals, closing with 3/8 if odd.
      const Index simpson_end = (intervals % 2 == 0) ? intervals : intervals - 3;
      for (Index i = 0; i < simpson_end; i += 2) {
        w(i) += h / 3.0;
        w(i + 1) += 4.0 * h / 3.0;
        w(i + 2) += h / 3.0;
      }
      if (simpson_end != intervals) {
        const Index i = simpson_end;
        w(i) += 3.0 * h / 8.0;
        w(i + 1) += 9.0 * h / 8.0;
        w(i + 2) += 9.0 * h / 8.0;
        w(i + 3) += 3.0 * h / 8.0;
      }
    }
    weights_.push_back(std::move(w));
  }
}

}  // namespace starwave
