#include <doctest.h>

#include <cmath>
#include <random>

#include "starwave/resolvent.hpp"

using namespace starwave;

namespace {

NetworkFunction bump_on_first(const SpatialGrid& grid, double center) {
  return NetworkFunction::sample(grid, [center](int k, double x) {
    return k == 0 ? Complex(std::exp(-4.0 * (x - center) * (x - center))) : Complex(0.0);
  }, 1e-6);
}

}  // namespace

TEST_CASE("kernel at the node is 1/w") {
  const auto net = StarNetwork::validate({{1, 0}, {2, 1}, {1, 4}});
  for (Complex lambda : {Complex(2, 0.5), Complex(5, -1), Complex(0.5, 0)}) {
    const auto p = kernel_params(net, lambda);
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        const Complex K = kernel_K(net, {{j, 0.0}, {k, 0.0}, lambda});
        CHECK(std::abs(K - 1.0 / p.w) < 1e-14);
      }
    }
  }
}

TEST_CASE("kernel symmetry and continuity") {
  const auto net = StarNetwork::validate({{1, 0}, {2, 1}, {1, 4}});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int i = 0; i < 300; ++i) {
    const Complex lambda(u(rng), u(rng) - 2.5);
    const int j = static_cast<int>(u(rng)) % 3;
    const double x = u(rng), y = u(rng);
    const Complex a = kernel_K(net, {{j, x}, {j, y}, lambda});
    const Complex b = kernel_K(net, {{j, y}, {j, x}, lambda});
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    const Complex lo = kernel_K(net, {{j, x}, {j, x * (1 - 1e-15)}, lambda});
    const Complex hi = kernel_K(net, {{j, x}, {j, x * (1 + 1e-15)}, lambda});
    CHECK(std::abs(lo - hi) <= 1e-12 * std::max(1.0, std::abs(lo)));
  }
}

TEST_CASE("kernel is real below the spectrum") {
  const auto net = StarNetwork::validate({{1, 0.5}, {2, 1}, {1, 4}});
  for (double lambda : {0.4, -1.0, 0.0}) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(kernel_K(net, {{j, 0.7}, {k, 1.9}, Complex(lambda)}).imag()) < 1e-14);
      }
    }
  }
}

TEST_CASE("singular Wronskian is rejected") {
  const auto net = StarNetwork::validate({{1, 2}, {1, 2}});
  CHECK_THROWS_AS(kernel_params(net, Complex(2.0)), Error);
}

TEST_CASE("resolvent residual contract") {
  const auto net = StarNetwork::validate({{1, 0}, {1, 3}});
  const SpatialGrid grid = uniform_grid(2, 0.01, 12.0);
  const QuadratureRule rule(grid);
  const auto f = bump_on_first(grid, 3.0);
  const Complex lambda(2.0, 0.5);
  const auto u = apply_resolvent(net, f, lambda, rule);
  CHECK(resolvent_residual(net, f, u, lambda, rule) < 1e-3);
}

TEST_CASE("cumulative and direct paths agree") {
  // The direct path integrates across the diagonal kink, so the two differ
  // at the discretization level only.
  const auto net = StarNetwork::validate({{1, 0}, {2, 1}, {1, 4}});
  const SpatialGrid grid = uniform_grid(3, 0.02, 8.0);
  const QuadratureRule rule(grid);
  const auto f = bump_on_first(grid, 3.0);
  for (Complex lambda : {Complex(2, 0.5), Complex(4, -0.1), Complex(2, 0)}) {
    const auto a = apply_resolvent(net, f, lambda, rule, ResolventMethod::cumulative);
    const auto b = apply_resolvent(net, f, lambda, rule, ResolventMethod::direct);
    CHECK(norm(a - b, rule) / norm(a, rule) < 5e-4);
  }
}

TEST_CASE("resolvent linearity and conjugation") {
  const auto net = StarNetwork::validate({{1, 0}, {1, 3}});
  const SpatialGrid grid = uniform_grid(2, 0.02, 10.0);
  const QuadratureRule rule(grid);
  const auto f = bump_on_first(grid, 3.0);
  const auto g = NetworkFunction::sample(grid, [](int k, double x) {
    return Complex(k == 1 ? std::exp(-(x - 4) * (x - 4)) : 0.0, 0.3 * std::exp(-(x - 5) * (x - 5)));
  }, 1e-5);
  const Complex lambda(2.0, 0.5), alpha(0.3, -1.2), beta(2.0, 0.1);
  const auto lhs = apply_resolvent(net, f * alpha + g * beta, lambda, rule);
  const auto rhs = apply_resolvent(net, f, lambda, rule) * alpha + apply_resolvent(net, g, lambda, rule) * beta;
  CHECK(norm(lhs - rhs, rule) <= 1e-13 * norm(lhs, rule));
  const auto conj_side = apply_resolvent(net, g.conj(), std::conj(lambda), rule);
  const auto direct = apply_resolvent(net, g, lambda, rule).conj();
  CHECK(norm(conj_side - direct, rule) <= 1e-13 * norm(direct, rule));
}

TEST_CASE("limiting absorption on a flat network uses the constant bound") {
  const auto net = StarNetwork::validate({{1, 0}, {1, 0}});
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  std::vector<KernelSample> samples;
  for (int i = 0; i < 200; ++i) {
    samples.push_back({{static_cast<int>(u(rng)) % 2, u(rng)}, {static_cast<int>(u(rng)) % 2, u(rng)}, 0.1 * u(rng) / 4.0});
  }
  const auto rep = limiting_absorption_check(net, 1.0, 0.1, samples);
  CHECK(rep.M == 1.0);
  CHECK(rep.bound_holds);
  CHECK(rep.converged);
}

TEST_CASE("limiting absorption bound with a closed branch") {
  const auto net = StarNetwork::validate({{1, 0}, {1, 3}});
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<KernelSample> samples;
  for (int i = 0; i < 1000; ++i) {
    samples.push_back({{u(rng) < 0.5 ? 0 : 1, 5 * u(rng)}, {u(rng) < 0.5 ? 0 : 1, 5 * u(rng)}, 0.1 * u(rng)});
  }
  const auto rep = limiting_absorption_check(net, 1.0, 0.1, samples);
  CHECK(rep.bound_holds);
  CHECK(rep.worst_bound_ratio <= 1.0);
  CHECK(rep.cauchy.back() < 1e-10);
  CHECK(rep.converged);
}
