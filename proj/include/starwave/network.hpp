#pragma once

// Star-shaped network: n half-lines glued at a single node, the functions that
// live on it, and quadrature over it.

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace starwave {

using Complex = std::complex<double>;
using Eigen::Index;
using Eigen::VectorXcd;
using Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One branch as given by the user: dispersion speed c and potential a.
struct BranchSpec {
  double c = 1.0;
  double a = 0.0;
};

/// Immutable star network with potentials sorted ascending.
///
/// Internal branch indices are 0-based and refer to the sorted order. The
/// permutation back to the user's labeling is kept so that files can be read
/// and written in the order the user supplied.
class StarNetwork {
 public:
  /// Validates and sorts. Throws Error on n < 2, c <= 0, a < 0 or non-finite input.
  static StarNetwork validate(std::span<const BranchSpec> raw);
  static StarNetwork validate(std::initializer_list<BranchSpec> raw) {
    return validate(std::span<const BranchSpec>(raw.begin(), raw.size()));
  }

  int size() const { return static_cast<int>(c_.size()); }
  double speed(int k) const { return c_[static_cast<std::size_t>(k)]; }
  double potential(int k) const { return a_[static_cast<std::size_t>(k)]; }
  const std::vector<double>& speeds() const { return c_; }
  const std::vector<double>& potentials() const { return a_; }

  /// Upper edge a_{p+1} of band p (0-based count of potentials below);
  /// nullopt stands for the unbounded edge above a_n.
  std::optional<double> upper_edge(int p) const;
  /// Distinct potential values, ascending.
  std::vector<double> distinct_edges() const;
  bool equal_potentials() const { return a_.front() == a_.back(); }

  /// user_label(k) is the 0-based position in the input of internal branch k.
  int user_label(int k) const { return to_user_[static_cast<std::size_t>(k)]; }
  int internal_index(int user) const;
  std::span<const int> permutation() const { return to_user_; }

 private:
  std::vector<double> c_;
  std::vector<double> a_;
  std::vector<int> to_user_;
};

struct BranchPoint {
  int branch = 0;
  double x = 0.0;
};

/// Uniform grid on one truncated branch [0, length].
struct BranchGrid {
  double dx = 0.01;
  double length = 1.0;

  Index samples() const;
  double x(Index i) const { return static_cast<double>(i) * dx; }
  bool operator==(const BranchGrid&) const = default;
};

using SpatialGrid = std::vector<BranchGrid>;

SpatialGrid uniform_grid(int branches, double dx, double length);

/// Complex samples on per-branch grids. The node sample (index 0) is stored on
/// every branch and is identical across branches by construction.
class NetworkFunction {
 public:
  NetworkFunction() = default;
  /// Rejects wrong sample counts and node samples that disagree by more than
  /// node_tolerance * max(1, |node|). Accepted node values are made identical.
  NetworkFunction(SpatialGrid grid, std::vector<VectorXcd> values,
                  double node_tolerance = 1e-12);

  static NetworkFunction zeros(const SpatialGrid& grid);
  static NetworkFunction sample(const SpatialGrid& grid,
                                const std::function<Complex(int, double)>& fn,
                                double node_tolerance = 1e-12);

  int branches() const { return static_cast<int>(grid_.size()); }
  const SpatialGrid& grid() const { return grid_; }
  const BranchGrid& grid(int k) const { return grid_[static_cast<std::size_t>(k)]; }
  const VectorXcd& values(int k) const { return values_[static_cast<std::size_t>(k)]; }
  Complex node() const { return values_.front()(0); }
  Complex operator()(int k, Index i) const { return values_[static_cast<std::size_t>(k)](i); }

  NetworkFunction conj() const;
  NetworkFunction operator+(const NetworkFunction& other) const;
  NetworkFunction operator-(const NetworkFunction& other) const;
  NetworkFunction operator*(Complex s) const;

 private:
  SpatialGrid grid_;
  std::vector<VectorXcd> values_;
};

enum class QuadratureKind { trapezoid, simpson };

/// Positive per-branch weights matching a SpatialGrid.
class QuadratureRule {
 public:
  explicit QuadratureRule(const SpatialGrid& grid,
                          QuadratureKind kind = QuadratureKind::simpson);

  QuadratureKind kind() const { return kind_; }
  const SpatialGrid& grid() const { return grid_; }
  const VectorXd& weights(int k) const { return weights_[static_cast<std::size_t>(k)]; }

 private:
  QuadratureKind kind_;
  SpatialGrid grid_;
  std::vector<VectorXd> weights_;
};

/// (f, g)_H = sum_k sum_i w_{k,i} f_{k,i} conj(g_{k,i}), branch-major order.
Complex integrate_network(const NetworkFunction& f, const NetworkFunction& g,
                          const QuadratureRule& rule);

double norm(const NetworkFunction& f, const QuadratureRule& rule);

struct TransmissionResidual {
  double t0 = 0.0;
  double t1 = 0.0;
};

/// Discrete (T0)/(T1) residuals at the node using one-sided second-order
/// derivatives. Needs at least 3 samples per branch.
TransmissionResidual transmission_residual(const NetworkFunction& f,
                                           const StarNetwork& net);

/// p such that lambda lies in (a_p, a_{p+1}); p = 0 below the spectrum.
/// Throws at a band edge.
int band_index(const StarNetwork& net, double lambda);

/// Second-order finite-difference A_h f = -c f'' + a f. The node row uses the
/// half-cell (finite-volume) balance of the Kirchhoff fluxes; the far end of
/// every branch is set to zero.
NetworkFunction apply_operator_fd(const StarNetwork& net, const NetworkFunction& f);

}  // namespace starwave
