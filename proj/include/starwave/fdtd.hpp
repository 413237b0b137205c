#pragma once

// Leapfrog reference solver for u_tt - c_k u_xx + a_k u = 0 on a truncated
// star, plus closed forms used to check it.

#include <functional>
#include <vector>

#include "starwave/network.hpp"

namespace starwave {

enum class BoundaryKind { dirichlet, neumann, sponge };
enum class NodeScheme { first_order, second_order };

struct FdtdConfig {
  double dx = 0.01;
  double dt = 0.005;
  std::vector<double> lengths;  // per branch
  BoundaryKind boundary = BoundaryKind::sponge;
  double sponge_width = 5.0;
  double sponge_strength = 20.0;
  NodeScheme node = NodeScheme::second_order;

  SpatialGrid grid() const;
  /// Throws on CFL violation, a sponge thinner than 10 dx or bad lengths.
  void check(const StarNetwork& net) const;
};

/// Config with dt = cfl * dx / max sqrt(c_k) and equal branch lengths.
FdtdConfig make_fdtd_config(const StarNetwork& net, double dx, double length, double cfl = 0.5,
                            BoundaryKind boundary = BoundaryKind::sponge);

struct FdtdState {
  double time = 0.0;
  long steps = 0;
  std::vector<VectorXd> previous;  // u at time - dt
  std::vector<VectorXd> current;   // u at time
};

/// State at t = 0 from (u0, v0); the back step uses a second-order Taylor expansion.
FdtdState fdtd_init(const StarNetwork& net, const FdtdConfig& cfg, const NetworkFunction& u0,
                    const NetworkFunction& v0);
FdtdState fdtd_step(const FdtdState& state, const StarNetwork& net, const FdtdConfig& cfg);
void fdtd_advance(FdtdState& state, const StarNetwork& net, const FdtdConfig& cfg);

/// Staggered discrete energy sum_k int u_t^2 + c_k u_x^2 + a_k u^2 between
/// the previous and current levels.
double fdtd_energy(const FdtdState& state, const StarNetwork& net, const FdtdConfig& cfg);

/// Node flux sum_k c_k u_x(0) from one-sided second-order differences.
double fdtd_node_flux(const FdtdState& state, const StarNetwork& net, const FdtdConfig& cfg);

NetworkFunction fdtd_solution(const FdtdState& state, const FdtdConfig& cfg);

struct FdtdRun {
  FdtdState state;
  double initial_energy = 0.0;
  double max_relative_drift = 0.0;
  bool energy_monotone = true;  // never increased by more than rounding
  double max_node_flux = 0.0;
};

/// Advances to time T (rounded to whole steps) tracking energy and node flux.
FdtdRun fdtd_run(const StarNetwork& net, const FdtdConfig& cfg, const NetworkFunction& u0,
                 const NetworkFunction& v0, double T);

/// Latest time before a wave leaving the data support (radius `extent` from
/// the node) reaches the sponge or the far end.
double causality_window(const StarNetwork& net, const FdtdConfig& cfg, double extent);

/// u(t) for two equal-speed branches with zero potential and v0 = 0, with
/// the branches glued into a line (X = -x on branch 0, X = x on branch 1).
NetworkFunction dalembert_reference(const StarNetwork& net, const SpatialGrid& grid,
                                    const std::function<double(double)>& u0_line, double t);

struct Scattering {
  double reflection = 0.0;
  double transmission = 0.0;
};

/// Pulse sent along branch 0 of n equal branches (c = 1, a = 0) into the
/// node; returns the signed peak ratios of the reflected and transmitted pulses.
Scattering measure_scattering(int n, double dx, NodeScheme scheme = NodeScheme::second_order);

}  // namespace starwave
