#include "starwave/resolvent.hpp"

#include <algorithm>
#include <cmath>

#include "starwave/parallel.hpp"

namespace starwave {

EigenParams<double> kernel_params(const StarNetwork& net, Complex lambda) {
  auto p = eigen_params<double>(net, lambda, kernel_sign(lambda));
  if (p.w == Complex(0.0, 0.0)) throw Error("singular point: Wronskian vanishes");
  return p;
}

Complex kernel_K(const EigenParams<double>& p, BranchPoint x, BranchPoint x_prime) {
  const int n = p.size();
  const int j = x.branch;
  const int next = (j + 1) % n;
  if (x_prime.branch == j && x_prime.x > x.x) {
    return eval_F(p, j, x) * eval_F(p, next, x_prime) / p.w;
  }
  return eval_F(p, next, x) * eval_F(p, j, x_prime) / p.w;
}

Complex kernel_K(const StarNetwork& net, const KernelQuery& q) {
  return kernel_K(kernel_params(net, q.lambda), q.x, q.x_prime);
}

namespace {

// Integrals of g over [x_i, x_{i+1}] from cubic interpolation through four
// neighbouring samples (one-sided at the ends).
VectorXcd interval_integrals(const VectorXcd& g, double h) {
  const Index n = g.size() - 1;
  VectorXcd out(n);
  if (n < 3) {
    for (Index i = 0; i < n; ++i) out(i) = 0.5 * h * (g(i) + g(i + 1));
    return out;
  }
  const double s = h / 24.0;
  for (Index i = 0; i < n; ++i) {
    if (i == 0) {
      out(i) = s * (9.0 * g(0) + 19.0 * g(1) - 5.0 * g(2) + g(3));
    } else if (i == n - 1) {
      out(i) = s * (g(n - 3) - 5.0 * g(n - 2) + 19.0 * g(n - 1) + 9.0 * g(n));
    } else {
      out(i) = s * (-g(i - 1) + 13.0 * g(i) + 13.0 * g(i + 1) - g(i + 2));
    }
  }
  return out;
}

NetworkFunction apply_cumulative(const EigenParams<double>& p, const NetworkFunction& f) {
  const int n = f.branches();
  const Complex sg_i = Complex(0.0, sign_value(p.sign));
  std::vector<VectorXcd> own_prefix(static_cast<std::size_t>(n));
  std::vector<VectorXcd> next_suffix(static_cast<std::size_t>(n));
  std::vector<Complex> whole(static_cast<std::size_t>(n));

  parallel_for(n, [&](std::ptrdiff_t jj) {
    const int j = static_cast<int>(jj);
    const BranchGrid& grid = f.grid(j);
    const VectorXcd& fj = f.values(j);
    const Index m = fj.size();
    VectorXcd g_own(m);
    VectorXcd g_next(m);
    for (Index i = 0; i < m; ++i) {
      const BranchPoint at{j, grid.x(i)};
      g_own(i) = eval_F(p, j, at) * fj(i);
      g_next(i) = std::exp(sg_i * p.xi[static_cast<std::size_t>(j)] * at.x) * fj(i);
    }
    const VectorXcd own_parts = interval_integrals(g_own, grid.dx);
    const VectorXcd next_parts = interval_integrals(g_next, grid.dx);
    VectorXcd prefix(m);
    VectorXcd suffix(m);
    prefix(0) = 0.0;
    for (Index i = 1; i < m; ++i) prefix(i) = prefix(i - 1) + own_parts(i - 1);
    suffix(m - 1) = 0.0;
    for (Index i = m - 1; i-- > 0;) suffix(i) = suffix(i + 1) + next_parts(i);
    whole[static_cast<std::size_t>(j)] = suffix(0);
    own_prefix[static_cast<std::size_t>(j)] = std::move(prefix);
    next_suffix[static_cast<std::size_t>(j)] = std::move(suffix);
  });

  Complex total = 0.0;
  for (const Complex& e : whole) total += e;
  const Complex node = total / p.w;

  std::vector<VectorXcd> out(static_cast<std::size_t>(n));
  parallel_for(n, [&](std::ptrdiff_t jj) {
    const int j = static_cast<int>(jj);
    const BranchGrid& grid = f.grid(j);
    const Index m = f.values(j).size();
    Complex others = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k != j) others += whole[static_cast<std::size_t>(k)];
    }
    const VectorXcd& prefix = own_prefix[static_cast<std::size_t>(j)];
    const VectorXcd& suffix = next_suffix[static_cast<std::size_t>(j)];
    VectorXcd r(m);
    r(0) = node;
    for (Index i = 1; i < m; ++i) {
      const BranchPoint at{j, grid.x(i)};
      const Complex outgoing = std::exp(sg_i * p.xi[static_cast<std::size_t>(j)] * at.x);
      r(i) = (outgoing * (prefix(i) + others) + eval_F(p, j, at) * suffix(i)) / p.w;
    }
    out[static_cast<std::size_t>(j)] = std::move(r);
  });
  return NetworkFunction(f.grid(), std::move(out));
}

NetworkFunction apply_direct(const EigenParams<double>& p, const NetworkFunction& f,
                             const QuadratureRule& rule) {
  const int n = f.branches();
  std::vector<Index> offsets(static_cast<std::size_t>(n) + 1, 0);
  for (int k = 0; k < n; ++k) {
    offsets[static_cast<std::size_t>(k) + 1] = offsets[static_cast<std::size_t>(k)] + f.values(k).size();
  }
  VectorXcd flat(offsets.back());
  parallel_for(offsets.back(), [&](std::ptrdiff_t idx) {
    int j = 0;
    while (offsets[static_cast<std::size_t>(j) + 1] <= idx) ++j;
    const Index i = idx - offsets[static_cast<std::size_t>(j)];
    const BranchPoint x{j, f.grid(j).x(i)};
    Complex sum = 0.0;
    for (int k = 0; k < n; ++k) {
      const VectorXd& w = rule.weights(k);
      const VectorXcd& fk = f.values(k);
      for (Index t = 0; t < fk.size(); ++t) {
        if (fk(t) == Complex(0.0, 0.0)) continue;
        sum += w(t) * kernel_K(p, x, BranchPoint{k, f.grid(k).x(t)}) * fk(t);
      }
    }
    flat(idx) = sum;
  });
  std::vector<VectorXcd> out;
  for (int k = 0; k < n; ++k) {
    VectorXcd v = flat.segment(offsets[static_cast<std::size_t>(k)], f.values(k).size());
    v(0) = flat(0);
    out.push_back(std::move(v));
  }
  return NetworkFunction(f.grid(), std::move(out));
}

}  // namespace

NetworkFunction apply_resolvent(const StarNetwork& net, const NetworkFunction& f, Complex lambda,
                                const QuadratureRule& rule, ResolventMethod method) {
  if (f.grid() != rule.grid()) throw Error("grid mismatch");
  if (f.branches() != net.size()) throw Error("branch count mismatch");
  const auto p = kernel_params(net, lambda);
  return method == ResolventMethod::cumulative ? apply_cumulative(p, f) : apply_direct(p, f, rule);
}

double resolvent_residual(const StarNetwork& net, const NetworkFunction& f,
                          const NetworkFunction& u, Complex lambda, const QuadratureRule& rule) {
  const NetworkFunction au = apply_operator_fd(net, u);
  double num = 0.0;
  double den = 0.0;
  for (int k = 0; k < f.branches(); ++k) {
    const VectorXd& w = rule.weights(k);
    for (Index i = 1; i + 1 < w.size(); ++i) {
      const Complex r = lambda * u(k, i) - au(k, i) - f(k, i);
      num += w(i) * std::norm(r);
      den += w(i) * std::norm(f(k, i));
    }
  }
  return std::sqrt(num / den);
}

LimitingAbsorptionReport limiting_absorption_check(const StarNetwork& net, double lambda,
                                                   double delta,
                                                   std::span<const KernelSample> samples,
                                                   int levels) {
  LimitingAbsorptionReport rep;
  rep.M = bound_M(net, lambda, delta);
  double weighted = 0.0;
  for (int j = 0; j < net.size(); ++j) weighted += net.speed(j) * std::abs(lambda - net.potential(j));
  rep.N = (1.0 + rep.M) / std::sqrt(weighted);
  double inv_root_c = 0.0;
  for (double c : net.speeds()) inv_root_c = std::max(inv_root_c, 1.0 / std::sqrt(c));
  const double spread = net.potentials().back() - net.potentials().front();
  rep.gamma = inv_root_c * std::max({std::pow(spread * spread + delta * delta, 0.25), 1.0, delta});

  for (const auto& s : samples) {
    const auto p = kernel_params(net, Complex(lambda, -s.eps));
    const double k = std::abs(kernel_K(p, s.x, s.x_prime));
    const double bound = rep.N * std::exp(rep.gamma * (s.x.x + s.x_prime.x));
    rep.worst_bound_ratio = std::max(rep.worst_bound_ratio, k / bound);
  }
  rep.bound_holds = rep.worst_bound_ratio <= 1.0;

  const auto limit = kernel_params(net, Complex(lambda, 0.0));
  std::vector<Complex> boundary;
  for (const auto& s : samples) boundary.push_back(kernel_K(limit, s.x, s.x_prime));
  for (int m = 0; m <= levels; ++m) {
    const double alpha = delta * std::ldexp(1.0, -m);
    const auto p = kernel_params(net, Complex(lambda, -alpha));
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      worst = std::max(worst, std::abs(kernel_K(p, samples[i].x, samples[i].x_prime) - boundary[i]));
    }
    rep.cauchy.push_back(worst);
  }
  rep.converged = !rep.cauchy.empty() && rep.cauchy.back() < 1e-10;
  return rep;
}

}  // namespace starwave
