#include <doctest.h>

#include <cmath>
#include <numbers>

#include "starwave/eigenbasis.hpp"
#include "starwave/network.hpp"

using namespace starwave;

TEST_CASE("validate accepts the minimal network") {
  const auto net = StarNetwork::validate({{1.0, 0.0}, {1.0, 0.0}});
  CHECK(net.size() == 2);
  CHECK(net.equal_potentials());
}

TEST_CASE("validate sorts potentials and keeps the permutation") {
  const auto net = StarNetwork::validate({{1.0, 4.0}, {1.0, 0.0}});
  CHECK(net.potential(0) == 0.0);
  CHECK(net.potential(1) == 4.0);
  CHECK(net.user_label(0) == 1);
  CHECK(net.user_label(1) == 0);
  CHECK(net.internal_index(0) == 1);
}

TEST_CASE("validate rejects bad input") {
  CHECK_THROWS_WITH_AS(StarNetwork::validate({{0.0, 0.0}, {1.0, 0.0}}), "nonpositive speed", Error);
  CHECK_THROWS_AS(StarNetwork::validate({{1.0, 0.0}}), Error);
  CHECK_THROWS_AS(StarNetwork::validate({{1.0, -1.0}, {1.0, 0.0}}), Error);
  CHECK_THROWS_AS(StarNetwork::validate({{NAN, 0.0}, {1.0, 0.0}}), Error);
}

TEST_CASE("node samples must agree") {
  const SpatialGrid grid = uniform_grid(2, 0.5, 1.0);
  VectorXcd a(3), b(3);
  a << 1.0, 2.0, 3.0;
  b << 1.5, 2.0, 3.0;
  CHECK_THROWS_AS(NetworkFunction(grid, {a, b}), Error);
  b(0) = 1.0;
  CHECK_NOTHROW(NetworkFunction(grid, {a, b}));
}

TEST_CASE("integrate_network") {
  SUBCASE("zero") {
    const SpatialGrid grid = uniform_grid(2, 0.1, 1.0);
    const auto z = NetworkFunction::zeros(grid);
    CHECK(std::abs(integrate_network(z, z, QuadratureRule(grid))) == 0.0);
  }
  SUBCASE("constants on unit branches") {
    const SpatialGrid grid = uniform_grid(2, 0.1, 1.0);
    const auto one = NetworkFunction::sample(grid, [](int, double) { return Complex(1.0); });
    for (auto kind : {QuadratureKind::simpson, QuadratureKind::trapezoid}) {
      CHECK(std::abs(integrate_network(one, one, QuadratureRule(grid, kind)) - 2.0) < 1e-12);
    }
  }
  SUBCASE("gaussian against erf") {
    const SpatialGrid grid = uniform_grid(2, 0.01, 12.0);
    const auto f = NetworkFunction::sample(grid, [](int k, double x) {
      return k == 0 ? Complex(std::exp(-(x - 3.0) * (x - 3.0))) : Complex(0.0);
    }, 1e-3);
    const double exact = 0.5 * std::sqrt(std::numbers::pi / 2.0) * (1.0 + std::erf(3.0 * std::sqrt(2.0)));
    CHECK(std::abs(integrate_network(f, f, QuadratureRule(grid)).real() - exact) < 1e-6);
  }
}

TEST_CASE("transmission_residual") {
  SUBCASE("constant") {
    const SpatialGrid grid = uniform_grid(3, 0.1, 1.0);
    const auto one = NetworkFunction::sample(grid, [](int, double) { return Complex(1.0); });
    const auto net = StarNetwork::validate({{1, 0}, {2, 0}, {1, 1}});
    const auto r = transmission_residual(one, net);
    CHECK(r.t0 == 0.0);
    CHECK(r.t1 == 0.0);
  }
  SUBCASE("eigenfunction") {
    const auto net = StarNetwork::validate({{1, 0}, {1, 3}});
    const auto p = eigen_params<double>(net, Complex(1.0), Sign::minus);
    const SpatialGrid grid = uniform_grid(2, 1e-3, 1.0);
    const auto f = NetworkFunction::sample(grid, [&](int k, double x) { return eval_F(p, 0, {k, x}); });
    const auto r = transmission_residual(f, net);
    CHECK(r.t0 == 0.0);
    CHECK(r.t1 < 1e-5);
  }
  SUBCASE("kink") {
    const auto net = StarNetwork::validate({{1, 0}, {1, 0}});
    const SpatialGrid grid = uniform_grid(2, 0.1, 1.0);
    const auto f = NetworkFunction::sample(grid, [](int k, double x) { return Complex(k == 0 ? x : 0.0); });
    CHECK(transmission_residual(f, net).t1 == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("band_index") {
  const auto b = StarNetwork::validate({{1, 0}, {1, 3}});
  const auto c = StarNetwork::validate({{1, 0}, {2, 1}, {1, 4}});
  CHECK(band_index(b, 1.0) == 1);
  CHECK(band_index(c, 2.0) == 2);
  CHECK(band_index(b, -1.0) == 0);
  CHECK(band_index(b, 7.0) == 2);
  CHECK_THROWS_AS(band_index(b, 3.0), Error);
}

TEST_CASE("finite-difference operator is second order on a smooth profile") {
  const auto net = StarNetwork::validate({{1, 0}, {1, 2}});
  auto err = [&](double dx) {
    const SpatialGrid grid = uniform_grid(2, dx, 8.0);
    const auto f = NetworkFunction::sample(grid, [](int k, double x) {
      return k == 0 ? Complex(std::exp(-(x - 4) * (x - 4))) : Complex(0.0);
    }, 1e-6);
    const auto af = apply_operator_fd(net, f);
    double e = 0.0;
    for (Index i = 1; i + 1 < af.values(0).size(); ++i) {
      const double x = grid[0].x(i), y = x - 4;
      const double exact = -(4 * y * y - 2) * std::exp(-y * y);
      e = std::max(e, std::abs(af(0, i) - exact));
    }
    return e;
  };
  CHECK(std::log2(err(0.02) / err(0.01)) > 1.9);
}
