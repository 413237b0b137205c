#pragma once

#include <vector>

#include "starwave/network.hpp"

namespace starwave {

struct SpectralGridOptions {
  int nodes_per_panel = 16;         // Gauss-Legendre order per subpanel
  double nodes_per_oscillation = 8.0;
  int min_subpanels = 2;            // per piece
  double extent = 20.0;             // largest |x| the integrands are evaluated at
  std::vector<double> extra_breakpoints;  // e.g. projector band ends
};

/// Panelized Gauss-Legendre grid on (a_1, cutoff).
///
/// Breakpoints are the distinct potentials, any extra breakpoints and the
/// cutoff. Next to a potential the substitution lambda = a + s^2 (or
/// lambda = a - s^2 below it) is applied, so band edges are never sampled and
/// the square-root behaviour of xi_k there becomes smooth in s. A segment
/// bounded by potentials on both sides is split at its midpoint. Subpanel
/// counts follow from the phase variation extent * |d xi|.
class SpectralGrid {
 public:
  static SpectralGrid build(const StarNetwork& net, double cutoff,
                            const SpectralGridOptions& options = {});
  /// Nodes on [lo, hi] with a_n <= lo < hi, using lambda = a_n + s^2.
  static SpectralGrid window(const StarNetwork& net, double lo, double hi,
                             const SpectralGridOptions& options = {});

  double cutoff() const { return cutoff_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  Index size() const { return lambda_.size(); }
  const VectorXd& lambda() const { return lambda_; }
  const VectorXd& weights() const { return weights_; }
  double lambda(Index t) const { return lambda_(t); }
  /// Index of the first node with lambda > a_k (nodes are ascending).
  Index first_above(int k) const { return first_above_[static_cast<std::size_t>(k)]; }
  /// Number of nodes above a_k.
  Index count_above(int k) const { return size() - first_above(k); }
  int branches() const { return static_cast<int>(first_above_.size()); }

  bool operator==(const SpectralGrid& other) const {
    return cutoff_ == other.cutoff_ && lambda_.size() == other.lambda_.size() &&
           lambda_ == other.lambda_ && weights_ == other.weights_;
  }

 private:
  void finish(const StarNetwork& net);

  double cutoff_ = 0.0;
  std::vector<double> breakpoints_;
  VectorXd lambda_;
  VectorXd weights_;
  std::vector<Index> first_above_;
};

}  // namespace starwave
