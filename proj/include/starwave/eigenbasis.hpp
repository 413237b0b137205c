#pragma once

// Spectral-parameter dependent scalars of the star network and the
// generalized eigenfunctions built from them. Templated on the real scalar so
// that the same formulas can be evaluated in extended precision.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "starwave/network.hpp"

namespace starwave {

enum class Sign : int { minus = -1, plus = +1 };

inline int sign_value(Sign s) { return static_cast<int>(s); }

/// Square root with the cut placed so that arg z is taken in [-pi, pi).
///
/// std::sqrt uses (-pi, pi] and differs on the negative real axis: there it
/// returns +i sqrt|z| where this returns -i sqrt|z|, which keeps exp(-i xi x)
/// decaying below the band edge.
template <typename Real>
std::complex<Real> branch_sqrt(std::complex<Real> z) {
  const Real r = std::abs(z);
  if (r == Real(0)) return {Real(0), Real(0)};
  Real phi = std::atan2(z.imag(), z.real());
  if (phi >= std::numbers::pi_v<Real>) phi -= 2 * std::numbers::pi_v<Real>;
  return std::polar(std::sqrt(r), phi / 2);
}

/// All lambda-dependent scalars at one spectral point.
template <typename Real>
struct EigenParams {
  using C = std::complex<Real>;

  C lambda;
  Sign sign = Sign::minus;
  std::vector<Real> c;
  std::vector<C> xi;        // branch_sqrt((lambda - a_k) / c_k)
  std::vector<C> xi_prime;  // i * xi_k
  std::vector<std::optional<C>> s;
  C w;  // sign * i * sum_k c_k xi_k

  int size() const { return static_cast<int>(xi.size()); }
  /// s_k, throwing where xi_k vanishes.
  C s_at(int k) const {
    const auto& v = s[static_cast<std::size_t>(k)];
    if (!v) throw Error("node coefficient s_k unavailable at a band edge");
    return *v;
  }
};

template <typename Real>
EigenParams<Real> eigen_params(const StarNetwork& net, std::complex<Real> lambda, Sign sign) {
  using C = std::complex<Real>;
  const int n = net.size();
  EigenParams<Real> p;
  p.lambda = lambda;
  p.sign = sign;
  p.c.resize(static_cast<std::size_t>(n));
  p.xi.resize(static_cast<std::size_t>(n));
  p.xi_prime.resize(static_cast<std::size_t>(n));
  p.s.resize(static_cast<std::size_t>(n));
  C sum{0, 0};
  for (int k = 0; k < n; ++k) {
    const auto ck = static_cast<Real>(net.speed(k));
    const auto ak = static_cast<Real>(net.potential(k));
    const C xi = branch_sqrt<Real>((lambda - ak) / ck);
    p.c[static_cast<std::size_t>(k)] = ck;
    p.xi[static_cast<std::size_t>(k)] = xi;
    p.xi_prime[static_cast<std::size_t>(k)] = C(0, 1) * xi;
    sum += ck * xi;
  }
  for (int k = 0; k < n; ++k) {
    const C own = p.c[static_cast<std::size_t>(k)] * p.xi[static_cast<std::size_t>(k)];
    if (own == C(0, 0)) continue;
    C others{0, 0};
    for (int l = 0; l < n; ++l) {
      if (l != k) others += p.c[static_cast<std::size_t>(l)] * p.xi[static_cast<std::size_t>(l)];
    }
    p.s[static_cast<std::size_t>(k)] = -others / own;
  }
  p.w = Real(sign_value(sign)) * C(0, 1) * sum;
  return p;
}

/// F^{sign,j}_lambda at a point of the network.
template <typename Real>
std::complex<Real> eval_F(const EigenParams<Real>& p, int j, BranchPoint at) {
  using C = std::complex<Real>;
  const Real sg = Real(sign_value(p.sign));
  const auto x = static_cast<Real>(at.x);
  const C xi = p.xi[static_cast<std::size_t>(at.branch)];
  if (at.branch == j) {
    return std::cos(xi * x) + sg * C(0, 1) * p.s_at(j) * std::sin(xi * x);
  }
  return std::exp(sg * C(0, 1) * xi * x);
}

/// Exact x-derivative of eval_F.
template <typename Real>
std::complex<Real> eval_F_deriv(const EigenParams<Real>& p, int j, BranchPoint at) {
  using C = std::complex<Real>;
  const Real sg = Real(sign_value(p.sign));
  const auto x = static_cast<Real>(at.x);
  const C xi = p.xi[static_cast<std::size_t>(at.branch)];
  if (at.branch == j) {
    return -xi * std::sin(xi * x) + sg * C(0, 1) * p.s_at(j) * xi * std::cos(xi * x);
  }
  return sg * C(0, 1) * xi * std::exp(sg * C(0, 1) * xi * x);
}

/// Exact second x-derivative: every piece is a combination of exp(+-i xi x),
/// so F'' = -xi_k^2 F on branch k.
template <typename Real>
std::complex<Real> eval_F_second_deriv(const EigenParams<Real>& p, int j, BranchPoint at) {
  const auto xi = p.xi[static_cast<std::size_t>(at.branch)];
  return -xi * xi * eval_F(p, j, at);
}

enum class MBound { as_stated, speed_weighted };

/// Upper bound M(lambda, delta) on |s_j(lambda - i eps)| for 0 < eps < delta.
///
/// as_stated is the classical formula without speed factors; it is only a
/// bound when all speeds coincide. speed_weighted multiplies it by
/// max_l sqrt(c_l) / min_j sqrt(c_j), which makes it valid for any speeds.
/// With equal potentials s_j is constant and the constant is returned.
inline double bound_M(const StarNetwork& net, double lambda, double delta,
                      MBound variant = MBound::as_stated) {
  const int n = net.size();
  if (net.equal_potentials()) {
    double m = 0.0;
    for (int j = 0; j < n; ++j) {
      double sum = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k != j) sum += std::sqrt(net.speed(k));
      }
      m = std::max(m, sum / std::sqrt(net.speed(j)));
    }
    return m;
  }
  double inv_root = 0.0;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = lambda - net.potential(k);
    inv_root = std::max(inv_root, 1.0 / std::sqrt(std::abs(d)));
    sum += std::pow(d * d + delta * delta, 0.25);
  }
  double m = inv_root * sum;
  if (variant == MBound::speed_weighted) {
    const auto [lo, hi] = std::minmax_element(net.speeds().begin(), net.speeds().end());
    m *= std::sqrt(*hi) / std::sqrt(*lo);
  }
  return m;
}

}  // namespace starwave
