#include "starwave/spectral_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "starwave/eigenbasis.hpp"
#include "starwave/quadrature.hpp"

namespace starwave {

namespace {

enum class Map { linear, from_lower, from_upper };

struct Piece {
  double lo;
  double hi;
  Map map;
  double anchor;  // a for lambda = a + s^2 or lambda = a - s^2

  double u0() const {
    switch (map) {
      case Map::linear: return lo;
      case Map::from_lower: return std::sqrt(std::max(0.0, lo - anchor));
      case Map::from_upper: return std::sqrt(std::max(0.0, anchor - hi));
    }
    return 0.0;
  }
  double u1() const {
    switch (map) {
      case Map::linear: return hi;
      case Map::from_lower: return std::sqrt(hi - anchor);
      case Map::from_upper: return std::sqrt(anchor - lo);
    }
    return 0.0;
  }
  double lambda(double u) const {
    switch (map) {
      case Map::linear: return u;
      case Map::from_lower: return anchor + u * u;
      case Map::from_upper: return anchor - u * u;
    }
    return 0.0;
  }
  double jacobian(double u) const { return map == Map::linear ? 1.0 : 2.0 * u; }
};

// Largest wavenumber change between consecutive probe points, summed.
double phase_variation(const StarNetwork& net, const Piece& piece) {
  constexpr int probes = 64;
  const double u0 = piece.u0();
  const double u1 = piece.u1();
  double total = 0.0;
  std::vector<Complex> prev;
  for (int i = 0; i <= probes; ++i) {
    const double u = u0 + (u1 - u0) * i / probes;
    std::vector<Complex> xi;
    for (int k = 0; k < net.size(); ++k) {
      xi.push_back(branch_sqrt<double>(Complex((piece.lambda(u) - net.potential(k)) / net.speed(k), 0.0)));
    }
    if (i > 0) {
      double step = 0.0;
      for (std::size_t k = 0; k < xi.size(); ++k) step = std::max(step, std::abs(xi[k] - prev[k]));
      total += step;
    }
    prev = std::move(xi);
  }
  return total;
}

void emit(const StarNetwork& net, const Piece& piece, const SpectralGridOptions& opt,
          std::vector<std::pair<double, double>>& nodes) {
  const GaussLegendre& gl = gauss_legendre(opt.nodes_per_panel);
  const double oscillations = opt.extent * phase_variation(net, piece) / (2.0 * std::numbers::pi);
  const double wanted = opt.nodes_per_oscillation * oscillations;
  const int sub = std::max(opt.min_subpanels,
                           static_cast<int>(std::ceil(wanted / opt.nodes_per_panel)));
  const double u0 = piece.u0();
  const double du = (piece.u1() - u0) / sub;
  for (int s = 0; s < sub; ++s) {
    const double left = u0 + s * du;
    for (Index i = 0; i < gl.nodes.size(); ++i) {
      const double u = left + 0.5 * du * (gl.nodes(i) + 1.0);
      nodes.emplace_back(piece.lambda(u), 0.5 * du * gl.weights(i) * piece.jacobian(u));
    }
  }
}

}  // namespace

SpectralGrid SpectralGrid::build(const StarNetwork& net, double cutoff,
                                 const SpectralGridOptions& options) {
  const std::vector<double> edges = net.distinct_edges();
  if (!(cutoff > edges.back())) throw Error("spectral cutoff must exceed the largest potential");
  std::vector<double> points = edges;
  for (double b : options.extra_breakpoints) {
    if (b > edges.front() && b < cutoff) points.push_back(b);
  }
  points.push_back(cutoff);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  auto is_edge = [&](double v) { return std::find(edges.begin(), edges.end(), v) != edges.end(); };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double lo = points[i];
    const double hi = points[i + 1];
    const bool lo_edge = is_edge(lo);
    const bool hi_edge = is_edge(hi);
    if (lo_edge && hi_edge) {
      const double mid = 0.5 * (lo + hi);
      pieces.push_back({lo, mid, Map::from_lower, lo});
      pieces.push_back({mid, hi, Map::from_upper, hi});
    } else if (lo_edge) {
      pieces.push_back({lo, hi, Map::from_lower, lo});
    } else if (hi_edge) {
      pieces.push_back({lo, hi, Map::from_upper, hi});
    } else {
      pieces.push_back({lo, hi, Map::linear, 0.0});
    }
  }

  std::vector<std::pair<double, double>> nodes;
  for (const auto& p : pieces) emit(net, p, options, nodes);
  std::stable_sort(nodes.begin(), nodes.end(),
                   [](const auto& l, const auto& r) { return l.first < r.first; });

  SpectralGrid g;
  g.cutoff_ = cutoff;
  g.breakpoints_ = points;
  g.lambda_.resize(static_cast<Index>(nodes.size()));
  g.weights_.resize(static_cast<Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    g.lambda_(static_cast<Index>(i)) = nodes[i].first;
    g.weights_(static_cast<Index>(i)) = nodes[i].second;
  }
  g.finish(net);
  return g;
}

SpectralGrid SpectralGrid::window(const StarNetwork& net, double lo, double hi,
                                  const SpectralGridOptions& options) {
  const double top = net.potentials().back();
  if (!(lo >= top && hi > lo)) throw Error("spectral window must lie above the largest potential");
  std::vector<std::pair<double, double>> nodes;
  emit(net, Piece{lo, hi, Map::from_lower, top}, options, nodes);
  SpectralGrid g;
  g.cutoff_ = hi;
  g.breakpoints_ = {lo, hi};
  g.lambda_.resize(static_cast<Index>(nodes.size()));
  g.weights_.resize(static_cast<Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    g.lambda_(static_cast<Index>(i)) = nodes[i].first;
    g.weights_(static_cast<Index>(i)) = nodes[i].second;
  }
  g.finish(net);
  return g;
}

void SpectralGrid::finish(const StarNetwork& net) {
  first_above_.clear();
  for (int k = 0; k < net.size(); ++k) {
    const double a = net.potential(k);
    const auto* begin = lambda_.data();
    const auto* end = begin + lambda_.size();
    first_above_.push_back(static_cast<Index>(std::upper_bound(begin, end, a) - begin));
  }
}

}  // namespace starwave
