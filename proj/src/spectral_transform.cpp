#include "starwave/spectral_transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "starwave/eigenbasis.hpp"
#include "starwave/parallel.hpp"

namespace starwave {

namespace {

constexpr Index kReseed = 128;  // recurrence restarts from an exact exponential

const Complex I(0.0, 1.0);

// First and last index of nonzero samples (empty range when first > last).
std::pair<Index, Index> support(const VectorXcd& v) {
  Index first = 0;
  while (first < v.size() && v(first) == Complex(0.0, 0.0)) ++first;
  Index last = v.size() - 1;
  while (last >= first && v(last) == Complex(0.0, 0.0)) --last;
  return {first, last};
}

// sum_i w_i f_i exp(i * k * x_i) over [first, last] by a reseeded recurrence.
Complex oscillatory_sum(const VectorXcd& f, const VectorXd& w, double dx, Complex k, Index first,
                        Index last) {
  Complex sum = 0.0;
  const Complex ratio = std::exp(I * k * dx);
  Complex phase = 0.0;
  for (Index i = first; i <= last; ++i) {
    if ((i - first) % kReseed == 0) {
      phase = std::exp(I * k * (static_cast<double>(i) * dx));
    } else {
      phase *= ratio;
    }
    sum += w(i) * f(i) * phase;
  }
  return sum;
}

double max_real_wavenumber(const StarNetwork& net, double lambda) {
  double m = 0.0;
  for (int k = 0; k < net.size(); ++k) {
    const double d = (lambda - net.potential(k)) / net.speed(k);
    if (d > 0.0) m = std::max(m, std::sqrt(d));
  }
  return m;
}

}  // namespace

SpectralFunction::SpectralFunction(const SpectralGrid& grid) : grid_size_(grid.size()) {
  for (int k = 0; k < grid.branches(); ++k) values_.push_back(VectorXcd::Zero(grid.count_above(k)));
}

SpectralFunction::SpectralFunction(const SpectralGrid& grid, std::vector<VectorXcd> values)
    : grid_size_(grid.size()), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid.branches()) throw Error("branch count mismatch");
  for (int k = 0; k < grid.branches(); ++k) {
    if (values_[static_cast<std::size_t>(k)].size() != grid.count_above(k)) {
      throw Error("spectral samples do not match grid");
    }
  }
}

VectorXd q_weights(const StarNetwork& net, double lambda, double kappa) {
  band_index(net, lambda);  // rejects band edges
  VectorXd q = VectorXd::Zero(net.size());
  const auto p = eigen_params<double>(net, Complex(lambda, 0.0), Sign::minus);
  const double w2 = std::norm(p.w);
  for (int k = 0; k < net.size(); ++k) {
    if (lambda > net.potential(k)) {
      q(k) = kappa * net.speed(k) * p.xi[static_cast<std::size_t>(k)].real() / w2;
    }
  }
  return q;
}

SpectralWeights spectral_weights(const StarNetwork& net, const SpectralGrid& grid, double kappa) {
  SpectralWeights sw;
  sw.kappa = kappa;
  for (int k = 0; k < net.size(); ++k) {
    sw.q.push_back(VectorXd::Zero(grid.count_above(k)));
    sw.measure.push_back(VectorXd::Zero(grid.count_above(k)));
  }
  for (Index t = 0; t < grid.size(); ++t) {
    const auto p = eigen_params<double>(net, Complex(grid.lambda(t), 0.0), Sign::minus);
    const double w2 = std::norm(p.w);
    for (int k = 0; k < net.size(); ++k) {
      if (t < grid.first_above(k)) continue;
      const Index i = t - grid.first_above(k);
      const double q = kappa * net.speed(k) * p.xi[static_cast<std::size_t>(k)].real() / w2;
      sw.q[static_cast<std::size_t>(k)](i) = q;
      sw.measure[static_cast<std::size_t>(k)](i) = q * grid.weights()(t);
    }
  }
  return sw;
}

SpectralFunction forward_V(const StarNetwork& net, const NetworkFunction& f,
                           const SpectralGrid& grid, const QuadratureRule& rule) {
  if (f.grid() != rule.grid()) throw Error("grid mismatch");
  if (f.branches() != net.size() || grid.branches() != net.size()) throw Error("branch count mismatch");
  const int n = net.size();
  double dx_max = 0.0;
  for (const auto& g : f.grid()) dx_max = std::max(dx_max, g.dx);
  if (dx_max * max_real_wavenumber(net, grid.cutoff()) >= 0.5) {
    throw Error("spectral cutoff unresolved");
  }
  std::vector<std::pair<Index, Index>> ranges;
  for (int b = 0; b < n; ++b) ranges.push_back(support(f.values(b)));

  SpectralFunction out(grid);
  parallel_for(grid.size(), [&](std::ptrdiff_t tt) {
    const Index t = tt;
    const double lambda = grid.lambda(t);
    const auto p = eigen_params<double>(net, Complex(lambda, 0.0), Sign::minus);
    std::vector<Complex> plus(static_cast<std::size_t>(n), 0.0);   // sum w f e^{+i xi x}
    std::vector<Complex> minus(static_cast<std::size_t>(n), 0.0);  // sum w f e^{-i xi x}
    std::vector<Complex> conj_exp(static_cast<std::size_t>(n), 0.0);  // sum w f conj(e^{-i xi x})
    for (int b = 0; b < n; ++b) {
      const auto [first, last] = ranges[static_cast<std::size_t>(b)];
      if (first > last) continue;
      const Complex xi = p.xi[static_cast<std::size_t>(b)];
      const double dx = f.grid(b).dx;
      if (lambda > net.potential(b)) {
        plus[static_cast<std::size_t>(b)] = oscillatory_sum(f.values(b), rule.weights(b), dx, xi, first, last);
        minus[static_cast<std::size_t>(b)] = oscillatory_sum(f.values(b), rule.weights(b), dx, -xi, first, last);
        conj_exp[static_cast<std::size_t>(b)] = plus[static_cast<std::size_t>(b)];
      } else {
        // e^{-i xi x} = e^{-xi' x} is real here.
        conj_exp[static_cast<std::size_t>(b)] =
            oscillatory_sum(f.values(b), rule.weights(b), dx, -xi, first, last);
      }
    }
    for (int k = 0; k < n; ++k) {
      if (t < grid.first_above(k)) continue;
      const std::size_t kk = static_cast<std::size_t>(k);
      const Complex cos_sum = 0.5 * (plus[kk] + minus[kk]);
      const Complex sin_sum = (plus[kk] - minus[kk]) / (2.0 * I);
      Complex v = cos_sum + I * std::conj(p.s_at(k)) * sin_sum;
      for (int b = 0; b < n; ++b) {
        if (b != k) v += conj_exp[static_cast<std::size_t>(b)];
      }
      out.values(k)(t - grid.first_above(k)) = v;
    }
  });
  return out;
}

NetworkFunction inverse_Z(const StarNetwork& net, const SpectralFunction& G,
                          const SpectralGrid& grid, const SpectralWeights& weights,
                          const SpatialGrid& out_grid) {
  const int n = net.size();
  if (G.grid_size() != grid.size() || G.branches() != n) throw Error("grid mismatch");
  if (static_cast<int>(out_grid.size()) != n) throw Error("branch count mismatch");
  const Index nodes = grid.size();

  // Per node: xi_b, and the coefficients of e^{-i xi_b x} (alpha) and e^{+i xi_b x} (beta).
  std::vector<std::vector<Complex>> xi(static_cast<std::size_t>(n), std::vector<Complex>(static_cast<std::size_t>(nodes)));
  std::vector<std::vector<Complex>> alpha = xi;
  std::vector<std::vector<Complex>> beta = xi;
  VectorXcd node_terms(nodes);
  parallel_for(nodes, [&](std::ptrdiff_t tt) {
    const Index t = tt;
    const auto p = eigen_params<double>(net, Complex(grid.lambda(t), 0.0), Sign::minus);
    std::vector<Complex> mg(static_cast<std::size_t>(n), 0.0);
    Complex total = 0.0;
    for (int k = 0; k < n; ++k) {
      if (t < grid.first_above(k)) continue;
      const Index i = t - grid.first_above(k);
      mg[static_cast<std::size_t>(k)] = weights.measure[static_cast<std::size_t>(k)](i) * G.values(k)(i);
      total += mg[static_cast<std::size_t>(k)];
    }
    node_terms(t) = total;
    for (int b = 0; b < n; ++b) {
      const std::size_t bb = static_cast<std::size_t>(b);
      const std::size_t ti = static_cast<std::size_t>(t);
      Complex others = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k != b) others += mg[static_cast<std::size_t>(k)];
      }
      xi[bb][ti] = p.xi[bb];
      if (t >= grid.first_above(b)) {
        const Complex s = p.s_at(b);
        alpha[bb][ti] = others + 0.5 * (1.0 + s) * mg[bb];
        beta[bb][ti] = 0.5 * (1.0 - s) * mg[bb];
      } else {
        alpha[bb][ti] = others;
        beta[bb][ti] = 0.0;
      }
    }
  });
  Complex node = 0.0;
  for (Index t = 0; t < nodes; ++t) node += node_terms(t);

  struct Block {
    int branch;
    Index begin;
    Index end;
  };
  std::vector<Block> blocks;
  std::vector<VectorXcd> out;
  for (int b = 0; b < n; ++b) {
    const Index m = out_grid[static_cast<std::size_t>(b)].samples();
    out.push_back(VectorXcd::Zero(m));
    for (Index s = 0; s < m; s += kReseed) blocks.push_back({b, s, std::min(m, s + kReseed)});
  }
  parallel_for(static_cast<std::ptrdiff_t>(blocks.size()), [&](std::ptrdiff_t bi) {
    const Block& blk = blocks[static_cast<std::size_t>(bi)];
    const std::size_t bb = static_cast<std::size_t>(blk.branch);
    const double dx = out_grid[bb].dx;
    VectorXcd& target = out[bb];
    for (Index t = 0; t < nodes; ++t) {
      const std::size_t ti = static_cast<std::size_t>(t);
      const Complex a = alpha[bb][ti];
      const Complex be = beta[bb][ti];
      if (a == Complex(0.0, 0.0) && be == Complex(0.0, 0.0)) continue;
      const Complex k = xi[bb][ti];
      const double x0 = static_cast<double>(blk.begin) * dx;
      Complex down = std::exp(-I * k * x0);
      const Complex down_ratio = std::exp(-I * k * dx);
      if (be == Complex(0.0, 0.0)) {
        for (Index i = blk.begin; i < blk.end; ++i) {
          target(i) += a * down;
          down *= down_ratio;
        }
      } else {
        Complex up = std::exp(I * k * x0);
        const Complex up_ratio = std::exp(I * k * dx);
        for (Index i = blk.begin; i < blk.end; ++i) {
          target(i) += a * down + be * up;
          down *= down_ratio;
          up *= up_ratio;
        }
      }
    }
  });
  for (auto& v : out) v(0) = node;
  return NetworkFunction(out_grid, std::move(out));
}

Complex inner_q(const SpectralFunction& G, const SpectralFunction& H, const SpectralWeights& weights) {
  if (G.grid_size() != H.grid_size() || G.branches() != H.branches()) throw Error("grid mismatch");
  Complex sum = 0.0;
  for (int k = 0; k < G.branches(); ++k) {
    const VectorXd& m = weights.measure[static_cast<std::size_t>(k)];
    if (m.size() != G.values(k).size()) throw Error("grid mismatch");
    for (Index i = 0; i < m.size(); ++i) sum += m(i) * G.values(k)(i) * std::conj(H.values(k)(i));
  }
  return sum;
}

double norm_q(const SpectralFunction& G, const SpectralWeights& weights) {
  return std::sqrt(std::max(0.0, inner_q(G, G, weights).real()));
}

SpectralFunction multiply(const SpectralFunction& G, const SpectralGrid& grid,
                          const std::function<Complex(double)>& h) {
  SpectralFunction out = G;
  for (int k = 0; k < G.branches(); ++k) {
    VectorXcd& v = out.values(k);
    for (Index i = 0; i < v.size(); ++i) v(i) *= h(grid.lambda(grid.first_above(k) + i));
  }
  return out;
}

SpectralContext SpectralContext::make(const StarNetwork& net, const SpatialGrid& spatial,
                                      double cutoff, double kappa, SpectralGridOptions options) {
  double longest = 0.0;
  for (const auto& g : spatial) longest = std::max(longest, static_cast<double>(g.samples() - 1) * g.dx);
  options.extent = std::max(options.extent, 2.0 * longest);
  SpectralGrid grid = SpectralGrid::build(net, cutoff, options);
  SpectralWeights weights = spectral_weights(net, grid, kappa);
  return SpectralContext{net, std::move(grid), std::move(weights), QuadratureRule(spatial)};
}

NetworkFunction apply_function(const SpectralContext& ctx, const std::function<Complex(double)>& h,
                               const NetworkFunction& f) {
  return ctx.Z(multiply(ctx.V(f), ctx.grid, h));
}

NetworkFunction project(const SpectralContext& ctx, double lo, double hi, const NetworkFunction& f) {
  return apply_function(ctx, [lo, hi](double l) { return (l > lo && l < hi) ? 1.0 : 0.0; }, f);
}

double sinc_multiplier(double lambda, double t) {
  const double root = std::sqrt(std::max(lambda, 0.0));
  const double arg = root * t;
  if (arg < 1e-4) {
    const double a2 = lambda * t * t;
    return t * (1.0 - a2 / 6.0 + a2 * a2 / 120.0);
  }
  return std::sin(arg) / root;
}

SpectralState evolve_spectral(const SpectralState& initial, const SpectralGrid& grid, double t) {
  SpectralState s = initial;
  for (int k = 0; k < initial.u.branches(); ++k) {
    for (Index i = 0; i < initial.u.values(k).size(); ++i) {
      const double lambda = grid.lambda(grid.first_above(k) + i);
      const double omega = std::sqrt(std::max(lambda, 0.0));
      const double c = std::cos(omega * t);
      const double m = sinc_multiplier(lambda, t);
      const Complex u0 = initial.u.values(k)(i);
      const Complex v0 = initial.v.values(k)(i);
      s.u.values(k)(i) = c * u0 + m * v0;
      s.v.values(k)(i) = -lambda * m * u0 + c * v0;
    }
  }
  return s;
}

std::vector<VectorXd> spectral_energy(const SpectralState& state, const SpectralGrid& grid) {
  std::vector<VectorXd> e;
  for (int k = 0; k < state.u.branches(); ++k) {
    VectorXd v(state.u.values(k).size());
    for (Index i = 0; i < v.size(); ++i) {
      const double lambda = grid.lambda(grid.first_above(k) + i);
      v(i) = std::norm(state.v.values(k)(i)) + lambda * std::norm(state.u.values(k)(i));
    }
    e.push_back(std::move(v));
  }
  return e;
}

NetworkFunction evolve_klein_gordon(const SpectralContext& ctx, const NetworkFunction& u0,
                                    const NetworkFunction& v0, double t) {
  if (ctx.net.potentials().front() < 0.0) throw Error("evolution needs a_1 >= 0");
  const SpectralState initial{ctx.V(u0), ctx.V(v0)};
  return ctx.Z(evolve_spectral(initial, ctx.grid, t).u);
}

namespace {

double support_extent(const NetworkFunction& f) {
  double extent = 0.0;
  for (int b = 0; b < f.branches(); ++b) {
    const auto [first, last] = support(f.values(b));
    if (first <= last) extent = std::max(extent, f.grid(b).x(last));
  }
  return std::max(extent, 1.0);
}

double dx_max(const NetworkFunction& f) {
  double d = 0.0;
  for (const auto& g : f.grid()) d = std::max(d, g.dx);
  return d;
}

}  // namespace

double spectral_tail(const StarNetwork& net, const NetworkFunction& f, const QuadratureRule& rule,
                     double lo, double hi, double kappa) {
  SpectralGridOptions opt;
  opt.extent = support_extent(f);
  const SpectralGrid grid = SpectralGrid::window(net, lo, hi, opt);
  const SpectralWeights w = spectral_weights(net, grid, kappa);
  const SpectralFunction v = forward_V(net, f, grid, rule);
  return inner_q(v, v, w).real();
}

double choose_cutoff(const StarNetwork& net, const NetworkFunction& f, double eps_tail,
                     const QuadratureRule& rule, const CutoffOptions& options) {
  const double top = net.potentials().back();
  const double step = options.first_probe > 0.0
                          ? options.first_probe
                          : std::max(1.0, top - net.potentials().front());
  double probe = top + step;
  if (!std::isfinite(eps_tail)) return probe;
  double threshold = eps_tail * eps_tail;
  if (options.relative) threshold *= integrate_network(f, f, rule).real();
  const double dx = dx_max(f);
  for (int m = 0; m <= options.max_doublings; ++m) {
    const double far = top + 2.0 * (probe - top);
    if (dx * max_real_wavenumber(net, far) >= 0.5) break;
    if (spectral_tail(net, f, rule, probe, far) < threshold) return probe;
    probe = far;
  }
  throw Error("f too rough for requested tolerance");
}

DomainDecayReport domain_decay_diagnostic(const StarNetwork& net, const NetworkFunction& u, int j,
                                          const QuadratureRule& rule, double base, int levels,
                                          double threshold, double kappa) {
  const double top = net.potentials().back();
  DomainDecayReport rep;
  auto power = [j](double l) { return std::pow(l, j); };
  SpectralGridOptions opt;
  opt.extent = support_extent(u);
  double accumulated = 0.0;
  double lo = top;
  for (int m = 0; m < levels; ++m) {
    const double cutoff = top + base * std::ldexp(1.0, m);
    const SpectralGrid grid = m == 0 ? SpectralGrid::build(net, cutoff, opt)
                                     : SpectralGrid::window(net, lo, cutoff, opt);
    const SpectralWeights w = spectral_weights(net, grid, kappa);
    const SpectralFunction v = multiply(forward_V(net, u, grid, rule), grid, power);
    accumulated += inner_q(v, v, w).real();
    rep.cutoffs.push_back(cutoff);
    rep.norms.push_back(std::sqrt(accumulated));
    lo = cutoff;
  }
  if (rep.norms.size() >= 3) {
    const double earlier = rep.norms[rep.norms.size() - 3];
    rep.growth = earlier > 0.0 ? rep.norms.back() / earlier : 1.0;
  } else {
    rep.growth = 1.0;
  }
  rep.bounded = rep.growth < threshold;
  return rep;
}

}  // namespace starwave
