#pragma once

// Forward transform V, inverse Z, the weighted space L^2_q and the functional
// calculus built on them.

#include <functional>
#include <numbers>
#include <vector>

#include "starwave/network.hpp"
#include "starwave/spectral_grid.hpp"

namespace starwave {

inline constexpr double kappa_default = 1.0 / std::numbers::pi;

/// (G_1, ..., G_n) with G_k sampled on the grid nodes above a_k.
class SpectralFunction {
 public:
  SpectralFunction() = default;
  explicit SpectralFunction(const SpectralGrid& grid);  // zeros
  SpectralFunction(const SpectralGrid& grid, std::vector<VectorXcd> values);

  int branches() const { return static_cast<int>(values_.size()); }
  Index grid_size() const { return grid_size_; }
  /// Samples of G_k; entry i belongs to grid node first_above(k) + i.
  const VectorXcd& values(int k) const { return values_[static_cast<std::size_t>(k)]; }
  VectorXcd& values(int k) { return values_[static_cast<std::size_t>(k)]; }

 private:
  Index grid_size_ = 0;
  std::vector<VectorXcd> values_;
};

/// q_k(lambda) = 0 for lambda < a_k, kappa c_k xi_k / |w|^2 above.
VectorXd q_weights(const StarNetwork& net, double lambda, double kappa = kappa_default);

/// q_k at every grid node together with the quadrature measure W_t q_k(t).
struct SpectralWeights {
  double kappa = kappa_default;
  std::vector<VectorXd> q;        // same layout as SpectralFunction
  std::vector<VectorXd> measure;  // grid weight times q
};

SpectralWeights spectral_weights(const StarNetwork& net, const SpectralGrid& grid,
                                 double kappa = kappa_default);

/// (Vf)_k(lambda) = int_N f conj(F^{-,k}_lambda) by spatial quadrature.
/// Throws "spectral cutoff unresolved" unless dx * max_k Re xi_k(cutoff) < 0.5.
SpectralFunction forward_V(const StarNetwork& net, const NetworkFunction& f,
                           const SpectralGrid& grid, const QuadratureRule& rule);

/// Z(G)(x) = sum_k int q_k G_k F^{-,k}_lambda(x) dlambda on out_grid.
NetworkFunction inverse_Z(const StarNetwork& net, const SpectralFunction& G,
                          const SpectralGrid& grid, const SpectralWeights& weights,
                          const SpatialGrid& out_grid);

Complex inner_q(const SpectralFunction& G, const SpectralFunction& H,
                const SpectralWeights& weights);
double norm_q(const SpectralFunction& G, const SpectralWeights& weights);

/// Pointwise product with h(lambda).
SpectralFunction multiply(const SpectralFunction& G, const SpectralGrid& grid,
                          const std::function<Complex(double)>& h);

/// Everything apply_function and friends need for one spatial grid.
struct SpectralContext {
  StarNetwork net;
  SpectralGrid grid;
  SpectralWeights weights;
  QuadratureRule rule;

  static SpectralContext make(const StarNetwork& net, const SpatialGrid& spatial, double cutoff,
                              double kappa = kappa_default, SpectralGridOptions options = {});
  SpectralFunction V(const NetworkFunction& f) const { return forward_V(net, f, grid, rule); }
  NetworkFunction Z(const SpectralFunction& G) const {
    return inverse_Z(net, G, grid, weights, rule.grid());
  }
};

/// h(A) f = Z(M_h V f).
NetworkFunction apply_function(const SpectralContext& ctx, const std::function<Complex(double)>& h,
                               const NetworkFunction& f);

/// Spectral projector E(lo, hi) f. For sharp results lo and hi should be grid
/// breakpoints (see SpectralGridOptions::extra_breakpoints).
NetworkFunction project(const SpectralContext& ctx, double lo, double hi, const NetworkFunction& f);

/// sin(sqrt(lambda) t) / sqrt(lambda), continued by t at lambda = 0.
double sinc_multiplier(double lambda, double t);

/// Spectral coefficients of (u, u_t) at time t: the 2x2 rotation per node.
struct SpectralState {
  SpectralFunction u;
  SpectralFunction v;
};
SpectralState evolve_spectral(const SpectralState& initial, const SpectralGrid& grid, double t);
/// Per-node |v|^2 + lambda |u|^2, conserved by evolve_spectral.
std::vector<VectorXd> spectral_energy(const SpectralState& state, const SpectralGrid& grid);

/// u(t) = Z[cos(sqrt(lambda) t) V u0 + sin(sqrt(lambda) t)/sqrt(lambda) V v0].
NetworkFunction evolve_klein_gordon(const SpectralContext& ctx, const NetworkFunction& u0,
                                    const NetworkFunction& v0, double t);

/// sum_k int_{lo}^{hi} q_k |Vf_k|^2 for a_n <= lo < hi.
double spectral_tail(const StarNetwork& net, const NetworkFunction& f, const QuadratureRule& rule,
                     double lo, double hi, double kappa = kappa_default);

struct CutoffOptions {
  double first_probe = 0.0;  // offset above a_n of the first probe; 0 picks max(1, a_n - a_1)
  int max_doublings = 20;
  bool relative = true;      // compare the tail with eps^2 (f, f)_H instead of eps^2
};

/// Smallest probe cutoff Lambda (a_n + first_probe * 2^m) whose tail
/// int_{Lambda}^{a_n + 2 (Lambda - a_n)} stays below eps_tail^2. Throws
/// "f too rough for requested tolerance" after max_doublings or once the
/// spatial grid can no longer resolve the probe.
double choose_cutoff(const StarNetwork& net, const NetworkFunction& f, double eps_tail,
                     const QuadratureRule& rule, const CutoffOptions& options = {});

struct DomainDecayReport {
  std::vector<double> cutoffs;
  std::vector<double> norms;  // ||lambda^j V u||_q up to each cutoff
  double growth = 0.0;        // norms.back() / norms[size - 3] (cutoff spread 4x)
  bool bounded = true;
};

/// Tail growth of ||M_{lambda^j} V u||_q for cutoffs a_n + base * 2^m,
/// m = 0..levels-1. Growth below `threshold` over the last factor 4 in the
/// cutoff counts as bounded.
DomainDecayReport domain_decay_diagnostic(const StarNetwork& net, const NetworkFunction& u, int j,
                                          const QuadratureRule& rule, double base = 25.0,
                                          int levels = 5, double threshold = 1.1,
                                          double kappa = kappa_default);

}  // namespace starwave
