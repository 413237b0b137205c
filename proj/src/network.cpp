#include "starwave/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace starwave {

StarNetwork StarNetwork::validate(std::span<const BranchSpec> raw) {
  if (raw.size() < 2) throw Error("network needs at least 2 branches");
  for (const auto& b : raw) {
    if (!std::isfinite(b.c) || !std::isfinite(b.a)) throw Error("non-finite branch parameter");
    if (b.c <= 0.0) throw Error("nonpositive speed");
    if (b.a < 0.0) throw Error("negative potential");
  }
  std::vector<int> order(raw.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int l, int r) { return raw[static_cast<std::size_t>(l)].a < raw[static_cast<std::size_t>(r)].a; });
  StarNetwork net;
  for (int u : order) {
    net.c_.push_back(raw[static_cast<std::size_t>(u)].c);
    net.a_.push_back(raw[static_cast<std::size_t>(u)].a);
  }
  net.to_user_ = std::move(order);
  return net;
}

std::optional<double> StarNetwork::upper_edge(int p) const {
  if (p >= size()) return std::nullopt;
  return a_[static_cast<std::size_t>(p)];
}

std::vector<double> StarNetwork::distinct_edges() const {
  std::vector<double> e = a_;
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

int StarNetwork::internal_index(int user) const {
  auto it = std::find(to_user_.begin(), to_user_.end(), user);
  if (it == to_user_.end()) throw Error("branch label out of range");
  return static_cast<int>(it - to_user_.begin());
}

Index BranchGrid::samples() const {
  return static_cast<Index>(std::floor(length / dx + 1e-9)) + 1;
}

SpatialGrid uniform_grid(int branches, double dx, double length) {
  if (!(dx > 0.0) || !(length > 0.0)) throw Error("grid spacing and length must be positive");
  return SpatialGrid(static_cast<std::size_t>(branches), BranchGrid{dx, length});
}

NetworkFunction::NetworkFunction(SpatialGrid grid, std::vector<VectorXcd> values,
                                 double node_tolerance)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() != values_.size() || grid_.empty()) throw Error("branch count mismatch");
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    if (values_[k].size() != grid_[k].samples()) throw Error("sample count does not match grid");
  }
  const Complex node = values_.front()(0);
  const double scale = std::max(1.0, std::abs(node));
  for (auto& v : values_) {
    if (std::abs(v(0) - node) > node_tolerance * scale) throw Error("inconsistent node values");
    v(0) = node;
  }
}

NetworkFunction NetworkFunction::zeros(const SpatialGrid& grid) {
  std::vector<VectorXcd> v;
  for (const auto& g : grid) v.push_back(VectorXcd::Zero(g.samples()));
  return NetworkFunction(grid, std::move(v));
}

NetworkFunction NetworkFunction::sample(const SpatialGrid& grid,
                                        const std::function<Complex(int, double)>& fn,
                                        double node_tolerance) {
  std::vector<VectorXcd> v;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    VectorXcd s(grid[k].samples());
    for (Index i = 0; i < s.size(); ++i) s(i) = fn(static_cast<int>(k), grid[k].x(i));
    v.push_back(std::move(s));
  }
  return NetworkFunction(grid, std::move(v), node_tolerance);
}

NetworkFunction NetworkFunction::conj() const {
  NetworkFunction out = *this;
  for (auto& v : out.values_) v = v.conjugate();
  return out;
}

NetworkFunction NetworkFunction::operator+(const NetworkFunction& other) const {
  if (grid_ != other.grid_) throw Error("grid mismatch");
  NetworkFunction out = *this;
  for (std::size_t k = 0; k < values_.size(); ++k) out.values_[k] += other.values_[k];
  return out;
}

NetworkFunction NetworkFunction::operator-(const NetworkFunction& other) const {
  return *this + other * Complex(-1.0);
}

NetworkFunction NetworkFunction::operator*(Complex s) const {
  NetworkFunction out = *this;
  for (auto& v : out.values_) v *= s;
  return out;
}

Complex integrate_network(const NetworkFunction& f, const NetworkFunction& g,
                          const QuadratureRule& rule) {
  if (f.grid() != g.grid() || f.grid() != rule.grid()) throw Error("grid mismatch");
  Complex sum = 0.0;
  for (int k = 0; k < f.branches(); ++k) {
    const VectorXd& w = rule.weights(k);
    const VectorXcd& fv = f.values(k);
    const VectorXcd& gv = g.values(k);
    for (Index i = 0; i < w.size(); ++i) sum += w(i) * fv(i) * std::conj(gv(i));
  }
  return sum;
}

double norm(const NetworkFunction& f, const QuadratureRule& rule) {
  return std::sqrt(std::max(0.0, integrate_network(f, f, rule).real()));
}

TransmissionResidual transmission_residual(const NetworkFunction& f, const StarNetwork& net) {
  if (f.branches() != net.size()) throw Error("branch count mismatch");
  TransmissionResidual r;
  for (int k = 0; k < f.branches(); ++k) {
    if (f.values(k).size() < 3) throw Error("transmission residual needs 3 samples per branch");
    for (int l = k + 1; l < f.branches(); ++l) {
      r.t0 = std::max(r.t0, std::abs(f(k, 0) - f(l, 0)));
    }
  }
  Complex flux = 0.0;
  for (int k = 0; k < f.branches(); ++k) {
    const double dx = f.grid(k).dx;
    const Complex d = (-3.0 * f(k, 0) + 4.0 * f(k, 1) - f(k, 2)) / (2.0 * dx);
    flux += net.speed(k) * d;
  }
  r.t1 = std::abs(flux);
  return r;
}

int band_index(const StarNetwork& net, double lambda) {
  int p = 0;
  for (double a : net.potentials()) {
    if (std::abs(lambda - a) <= 1e-14 * std::max(1.0, std::abs(lambda))) {
      throw Error("spectral parameter on a band edge");
    }
    if (a < lambda) ++p;
  }
  return p;
}

NetworkFunction apply_operator_fd(const StarNetwork& net, const NetworkFunction& f) {
  std::vector<VectorXcd> out;
  Complex flux = 0.0;
  double half_cells = 0.0;
  Complex potential_term = 0.0;
  for (int k = 0; k < f.branches(); ++k) {
    const double dx = f.grid(k).dx;
    const double c = net.speed(k);
    const double a = net.potential(k);
    const VectorXcd& u = f.values(k);
    VectorXcd r = VectorXcd::Zero(u.size());
    for (Index i = 1; i + 1 < u.size(); ++i) {
      r(i) = -c * (u(i + 1) - 2.0 * u(i) + u(i - 1)) / (dx * dx) + a * u(i);
    }
    flux += c * (u(1) - u(0)) / dx;
    half_cells += 0.5 * dx;
    potential_term += 0.5 * dx * a * u(0);
    out.push_back(std::move(r));
  }
  const Complex node = (-flux + potential_term) / half_cells;
  for (auto& r : out) r(0) = node;
  return NetworkFunction(f.grid(), std::move(out));
}

}  // namespace starwave
