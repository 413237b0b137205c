#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "starwave/eigenbasis.hpp"
#include "starwave/spectral_transform.hpp"
#include "starwave/validation.hpp"

using namespace starwave;

namespace {

const double pi = std::numbers::pi;

NetworkFunction pulse_on(const SpatialGrid& grid, int branch, double center, double width) {
  return NetworkFunction::sample(grid, [=](int k, double x) {
    return k == branch ? Complex(smooth_pulse(x, center, width)) : Complex(0.0);
  });
}

double rel(const NetworkFunction& a, const NetworkFunction& b, const QuadratureRule& rule) {
  return norm(a - b, rule) / norm(b, rule);
}

}  // namespace

TEST_CASE("q_weights hand values") {
  const auto a = reference_network('A');
  const VectorXd qa = q_weights(a, 4.0);
  for (int k = 0; k < 3; ++k) CHECK(qa(k) == doctest::Approx(1.0 / (18.0 * pi)).epsilon(1e-14));
  const auto b = reference_network('B');
  const VectorXd qb = q_weights(b, 1.0);
  CHECK(qb(0) == doctest::Approx(1.0 / (3.0 * pi)).epsilon(1e-14));
  CHECK(qb(1) == 0.0);
  for (char name : {'A', 'B', 'C'}) CHECK(q_weights(reference_network(name), -0.5).isZero(0.0));
  CHECK(q_weights(b, 1.0, 1.0)(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("sinc multiplier is continuous at zero") {
  CHECK(sinc_multiplier(0.0, 2.0) == 2.0);
  const double l = 1e-12;
  CHECK(sinc_multiplier(l, 2.0) == doctest::Approx(std::sin(std::sqrt(l) * 2.0) / std::sqrt(l)).epsilon(1e-15));
  CHECK(sinc_multiplier(4.0, 1.0) == doctest::Approx(std::sin(2.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("forward_V of zero") {
  const auto net = reference_network('B');
  const SpatialGrid grid = uniform_grid(2, 0.02, 6.0);
  const auto ctx = SpectralContext::make(net, grid, 50.0);
  const auto v = ctx.V(NetworkFunction::zeros(grid));
  for (int k = 0; k < 2; ++k) CHECK(v.values(k).isZero(0.0));
  CHECK(ctx.Z(v).values(0).isZero(0.0));
  CHECK(std::abs(inner_q(v, v, ctx.weights)) == 0.0);
}

TEST_CASE("forward_V on the free line is the Fourier transform") {
  const auto net = StarNetwork::validate({{1, 0}, {1, 0}});
  const SpatialGrid grid = uniform_grid(2, 0.01, 12.0);
  const auto f = NetworkFunction::sample(grid, [](int k, double x) {
    return k == 0 ? Complex(std::exp(-(x - 5) * (x - 5))) : Complex(0.0);
  }, 1e-10);
  const auto ctx = SpectralContext::make(net, grid, 100.0);
  const auto v = ctx.V(f);
  double err = 0.0;
  for (Index t = 0; t < ctx.grid.size(); ++t) {
    const double xi = std::sqrt(ctx.grid.lambda(t));
    const Complex exact = std::sqrt(pi) * std::exp(-xi * xi / 4.0) * std::exp(Complex(0.0, -5.0 * xi));
    err = std::max(err, std::abs(v.values(0)(t) - exact));
  }
  CHECK(err < 1e-6);
}

TEST_CASE("forward_V matches direct quadrature of the eigenfunctions") {
  const auto net = reference_network('C');
  const SpatialGrid grid = uniform_grid(3, 0.01, 6.0);
  const QuadratureRule rule(grid);
  const auto f = NetworkFunction::sample(grid, [](int k, double x) {
    return Complex(smooth_pulse(x, 2.5 + 0.3 * k, 0.6), 0.1 * k * smooth_pulse(x, 3.0, 0.5));
  });
  const auto ctx = SpectralContext::make(net, grid, 40.0);
  const auto v = ctx.V(f);
  for (int k = 0; k < 3; ++k) {
    const Index first = ctx.grid.first_above(k);
    for (Index i = 0; i < v.values(k).size(); i += 7) {
      const double lambda = ctx.grid.lambda(first + i);
      const auto p = eigen_params<double>(net, Complex(lambda), Sign::minus);
      const auto F = NetworkFunction::sample(grid, [&](int b, double x) { return eval_F(p, k, {b, x}); });
      const Complex oracle = integrate_network(f, F, rule);
      CHECK(std::abs(v.values(k)(i) - oracle) < 1e-10);
    }
  }
}

TEST_CASE("real f has conjugate-symmetric transform") {
  // With every branch open at real lambda, F^+ = conj(F^-), so the plus
  // transform of real f is conj(Vf).
  const auto net = reference_network('C');
  const SpatialGrid grid = uniform_grid(3, 0.01, 6.0);
  const QuadratureRule rule(grid);
  const auto f = pulse_on(grid, 1, 3.0, 0.6);
  const auto ctx = SpectralContext::make(net, grid, 40.0);
  const auto v = ctx.V(f);
  const Index first = ctx.grid.first_above(2);
  for (int k = 0; k < 3; ++k) {
    const Index off = first - ctx.grid.first_above(k);
    for (Index t = first; t < ctx.grid.size(); t += 11) {
      const auto p = eigen_params<double>(net, Complex(ctx.grid.lambda(t)), Sign::plus);
      const auto F = NetworkFunction::sample(grid, [&](int b, double x) { return eval_F(p, k, {b, x}); });
      const Complex plus = integrate_network(f, F, rule);
      CHECK(std::abs(plus - std::conj(v.values(k)(off + t - first))) < 1e-10);
    }
  }
}

TEST_CASE("resolution guard") {
  const auto net = reference_network('B');
  const SpatialGrid grid = uniform_grid(2, 0.1, 6.0);
  const auto f = pulse_on(grid, 0, 3.0, 0.6);
  const auto sg = SpectralGrid::build(net, 200.0);
  CHECK_THROWS_WITH_AS(forward_V(net, f, sg, QuadratureRule(grid)), "spectral cutoff unresolved", Error);
}

TEST_CASE("round trip and Plancherel on a closed-branch network") {
  const auto net = reference_network('B');
  const SpatialGrid grid = uniform_grid(2, 0.01, 8.0);
  const QuadratureRule rule(grid);
  const auto f = pulse_on(grid, 0, 3.0, 0.6);
  const double cutoff = choose_cutoff(net, f, 1e-4, rule);
  const auto ctx = SpectralContext::make(net, grid, cutoff);
  const auto v = ctx.V(f);
  CHECK(rel(ctx.Z(v), f, rule) < 1e-2);
  const double ff = integrate_network(f, f, rule).real();
  CHECK(std::abs(inner_q(v, v, ctx.weights).real() / ff - 1.0) < 1e-3);
  const auto unit = spectral_weights(net, ctx.grid, 1.0);
  CHECK(std::abs(inner_q(v, v, unit).real() / ff - pi) < 1e-2);
}

TEST_CASE("evanescent tail of a band below the top potential") {
  // Band (1, 2) lies below a_2 = 3, so on the closed branch the projected
  // data is a superposition of exp(-sqrt(3 - lambda) x) with rate at least 1.
  const auto net = reference_network('B');
  const SpatialGrid grid = uniform_grid(2, 0.01, 8.0);
  SpectralGridOptions opt;
  opt.extra_breakpoints = {1.0, 2.0};
  const auto ctx = SpectralContext::make(net, grid, 203.0, kappa_default, opt);
  const auto band = project(ctx, 1.0, 2.0, pulse_on(grid, 0, 4.0, 0.6));
  const double node = std::abs(band.node());
  REQUIRE(node > 0.0);
  for (double x : {2.0, 4.0}) {
    const Index i = static_cast<Index>(std::lround(x / grid[1].dx));
    CHECK(std::abs(band(1, i)) < 2.0 * node * std::exp(-x));
  }
}

TEST_CASE("duality of V and Z") {
  const auto net = reference_network('C');
  const SpatialGrid grid = uniform_grid(3, 0.02, 6.0);
  const QuadratureRule rule(grid);
  const auto ctx = SpectralContext::make(net, grid, 30.0);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  SpectralFunction G(ctx.grid);
  for (int k = 0; k < 3; ++k) {
    const Complex a(g(rng), g(rng));
    const double center = 6.0 + 3.0 * k;
    const Index first = ctx.grid.first_above(k);
    for (Index i = 0; i < G.values(k).size(); ++i) {
      const double l = ctx.grid.lambda(first + i);
      G.values(k)(i) = a * std::exp(-(l - center) * (l - center));
    }
  }
  const auto f = NetworkFunction::sample(grid, [](int k, double x) {
    return Complex(smooth_pulse(x, 2.0 + k, 0.5), smooth_pulse(x, 3.0, 0.4));
  });
  const Complex lhs = inner_q(G, ctx.V(f), ctx.weights);
  const Complex rhs = integrate_network(ctx.Z(G), f, rule);
  CHECK(std::abs(lhs - rhs) < 1e-6 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("identity multiplier") {
  const auto net = reference_network('C');
  const SpatialGrid grid = uniform_grid(3, 0.01, 8.0);
  const auto ctx = SpectralContext::make(net, grid, 204.0);
  const auto f = pulse_on(grid, 0, 3.0, 0.6);
  CHECK(rel(apply_function(ctx, [](double) { return Complex(1.0); }, f), f, ctx.rule) < 1e-2);
}

TEST_CASE("projectors") {
  // A sharp cut in lambda leaves 1/x tails in space that a truncated branch
  // clips, so the data is a wide packet whose spectrum sits well inside (2, 6).
  const auto net = reference_network('C');
  const double sigma = 8.0;
  const SpatialGrid grid = uniform_grid(3, 0.02, 10.0 * sigma);
  const QuadratureRule rule(grid);
  SpectralGridOptions opt;
  opt.extra_breakpoints = {2.0, 3.0, 5.0, 6.0};
  const auto ctx = SpectralContext::make(net, grid, 34.0, kappa_default, opt);
  const auto f = NetworkFunction::sample(grid, [&](int k, double x) {
    const double y = (x - 5.0 * sigma) / sigma;
    return k == 0 ? std::exp(-y * y) * std::exp(Complex(0.0, 2.0 * x)) : Complex(0.0);
  }, 1e-3);
  const double nf = norm(f, rule);
  const auto e = project(ctx, 2.0, 6.0, f);
  CHECK(norm(project(ctx, 2.0, 6.0, e) - e, rule) / nf < 1e-2);
  const auto inner = project(ctx, 3.0, 5.0, f);
  CHECK(norm(project(ctx, 2.0, 6.0, inner) - inner, rule) / nf < 1e-2);
  CHECK(norm(project(ctx, 5.0, 6.0, project(ctx, 2.0, 3.0, f)), rule) / nf < 1e-2);
}

TEST_CASE("multiplication by lambda diagonalizes the operator") {
  const auto net = reference_network('B');
  const SpatialGrid grid = uniform_grid(2, 0.005, 6.0);
  const auto u = NetworkFunction::sample(grid, [](int k, double x) {
    return Complex(smooth_bump(x, 3.0 - 0.5 * k, 1.5));
  });
  const auto ctx = SpectralContext::make(net, grid, 203.0);
  const auto vu = ctx.V(u);
  auto diff = ctx.V(apply_operator_fd(net, u));
  const auto rhs = multiply(vu, ctx.grid, [](double l) { return Complex(l); });
  for (int k = 0; k < 2; ++k) diff.values(k) -= rhs.values(k);
  CHECK(norm_q(diff, ctx.weights) / norm_q(vu, ctx.weights) < 1e-3);
}

TEST_CASE("choose_cutoff") {
  const auto net = reference_network('B');
  const SpatialGrid grid = uniform_grid(2, 0.005, 8.0);
  const QuadratureRule rule(grid);
  const double wide = choose_cutoff(net, pulse_on(grid, 0, 3.0, 0.8), 1e-4, rule);
  const double narrow = choose_cutoff(net, pulse_on(grid, 0, 3.0, 0.3), 1e-4, rule);
  CHECK(narrow > wide);
  CHECK(choose_cutoff(net, pulse_on(grid, 0, 3.0, 0.3), std::numeric_limits<double>::infinity(), rule) == 6.0);
  const auto step = NetworkFunction::sample(grid, [](int k, double x) {
    return Complex(k == 0 && x > 2.0 && x < 4.0 ? 1.0 : 0.0);
  });
  bool flagged = false;
  try {
    flagged = choose_cutoff(net, step, 1e-4, rule) > narrow;
  } catch (const Error& e) {
    flagged = std::string(e.what()) == "f too rough for requested tolerance";
  }
  CHECK(flagged);
}

TEST_CASE("spectral evolution") {
  const auto net = reference_network('C');
  const SpatialGrid grid = uniform_grid(3, 0.01, 8.0);
  const QuadratureRule rule(grid);
  const auto ctx = SpectralContext::make(net, grid, 204.0);
  const auto u0 = pulse_on(grid, 0, 3.0, 0.6);
  const auto v0 = pulse_on(grid, 2, 3.0, 0.6) * Complex(0.5);
  SUBCASE("t = 0") {
    CHECK(rel(evolve_klein_gordon(ctx, u0, v0, 0.0), u0, rule) < 1e-2);
  }
  SUBCASE("per-node energy") {
    const SpectralState s0{ctx.V(u0), ctx.V(v0)};
    const auto e0 = spectral_energy(s0, ctx.grid);
    for (double t : {0.5, 3.0, 17.0}) {
      const auto e = spectral_energy(evolve_spectral(s0, ctx.grid, t), ctx.grid);
      for (std::size_t k = 0; k < e.size(); ++k) {
        CHECK((e[k] - e0[k]).cwiseAbs().maxCoeff() <= 1e-13 * e0[k].cwiseAbs().maxCoeff());
      }
    }
  }
}

TEST_CASE("domain diagnostic") {
  const auto net = reference_network('A');
  const SpatialGrid grid = uniform_grid(3, 0.005, 8.0);
  const QuadratureRule rule(grid);
  const auto zero = domain_decay_diagnostic(net, NetworkFunction::zeros(grid), 1, rule);
  for (double n : zero.norms) CHECK(n == 0.0);
  const auto smooth = domain_decay_diagnostic(net, pulse_on(grid, 0, 3.0, 0.6), 1, rule);
  CHECK(smooth.bounded);
  const auto kink = domain_decay_diagnostic(net, NetworkFunction::sample(grid, [](int k, double x) {
    return Complex(k == 0 ? std::exp(-x) * smooth_bump(x, 0.0, 3.0) : smooth_bump(x, 0.0, 3.0));
  }), 1, rule);
  CHECK_FALSE(kink.bounded);
}
