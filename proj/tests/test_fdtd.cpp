#include <doctest.h>

#include <cmath>

#include "starwave/fdtd.hpp"
#include "starwave/validation.hpp"

using namespace starwave;

TEST_CASE("config checks") {
  const auto net = reference_network('C');
  auto cfg = make_fdtd_config(net, 0.01, 10.0);
  CHECK_NOTHROW(cfg.check(net));
  cfg.dt = 0.01;
  CHECK_THROWS_AS(cfg.check(net), Error);
  cfg = make_fdtd_config(net, 0.01, 10.0);
  cfg.sponge_width = 0.05;
  CHECK_THROWS_AS(cfg.check(net), Error);
}

TEST_CASE("constant state is stationary without potential") {
  const auto net = StarNetwork::validate({{1, 0}, {2, 0}, {0.5, 0}});
  const auto cfg = make_fdtd_config(net, 0.05, 4.0, 0.5, BoundaryKind::neumann);
  const auto grid = cfg.grid();
  const auto one = NetworkFunction::sample(grid, [](int, double) { return Complex(1.0); });
  auto s = fdtd_init(net, cfg, one, NetworkFunction::zeros(grid));
  for (int i = 0; i < 100; ++i) fdtd_advance(s, net, cfg);
  for (const auto& v : s.current) CHECK((v.array() - 1.0).abs().maxCoeff() < 1e-13);
}

TEST_CASE("energy is conserved with reflecting ends") {
  const auto net = reference_network('C');
  const auto cfg = make_fdtd_config(net, 0.01, 8.0, 0.5, BoundaryKind::dirichlet);
  const auto grid = cfg.grid();
  const auto u0 = NetworkFunction::sample(grid, [](int k, double x) {
    return Complex(k == 1 ? smooth_pulse(x, 3.0, 0.5) : 0.0);
  });
  const auto run = fdtd_run(net, cfg, u0, NetworkFunction::zeros(grid), 12.0);
  CHECK(run.max_relative_drift < 1e-3);
  CHECK(run.max_node_flux < 1e-8);
}

TEST_CASE("sponge only removes energy") {
  const auto net = reference_network('A');
  const auto cfg = make_fdtd_config(net, 0.01, 10.0);
  const auto grid = cfg.grid();
  const auto u0 = NetworkFunction::sample(grid, [](int k, double x) {
    return Complex(k == 0 ? smooth_pulse(x, 2.5, 0.5) : 0.0);
  });
  const auto run = fdtd_run(net, cfg, u0, NetworkFunction::zeros(grid), 15.0);
  CHECK(run.energy_monotone);
  CHECK(fdtd_energy(run.state, net, cfg) < 1e-2 * run.initial_energy);
}

TEST_CASE("free line matches d'Alembert") {
  const auto net = StarNetwork::validate({{1, 0}, {1, 0}});
  const auto cfg = make_fdtd_config(net, 0.005, 12.0, 0.5, BoundaryKind::dirichlet);
  const auto grid = cfg.grid();
  auto profile = [](double X) { return std::exp(-4.0 * (X - 1.0) * (X - 1.0)); };
  const auto u0 = NetworkFunction::sample(grid, [&](int k, double x) { return Complex(profile(k == 0 ? -x : x)); });
  const auto run = fdtd_run(net, cfg, u0, NetworkFunction::zeros(grid), 3.0);
  const auto ref = dalembert_reference(net, grid, profile, run.state.time);
  const auto u = fdtd_solution(run.state, cfg);
  for (int k = 0; k < 2; ++k) CHECK((u.values(k) - ref.values(k)).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("scattering at an equal three-branch node") {
  const auto s = measure_scattering(3, 0.01);
  CHECK(s.reflection == doctest::Approx(-1.0 / 3.0).epsilon(1e-2));
  CHECK(s.transmission == doctest::Approx(2.0 / 3.0).epsilon(1e-2));
}

TEST_CASE("causality window shrinks with faster branches") {
  const auto slow = StarNetwork::validate({{1, 0}, {1, 0}});
  const auto fast = StarNetwork::validate({{1, 0}, {4, 0}});
  const auto cs = make_fdtd_config(slow, 0.01, 20.0);
  const auto cf = make_fdtd_config(fast, 0.01, 20.0);
  CHECK(causality_window(fast, cf, 3.0) < causality_window(slow, cs, 3.0));
}
