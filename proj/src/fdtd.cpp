#include "starwave/fdtd.hpp"

#include <algorithm>
#include <cmath>

#include "starwave/parallel.hpp"

namespace starwave {

namespace {

double max_root_speed(const StarNetwork& net) {
  double m = 0.0;
  for (double c : net.speeds()) m = std::max(m, std::sqrt(c));
  return m;
}

double damping(const FdtdConfig& cfg, double x, double length) {
  if (cfg.boundary != BoundaryKind::sponge) return 0.0;
  const double start = length - cfg.sponge_width;
  if (x <= start) return 0.0;
  const double r = (x - start) / cfg.sponge_width;
  return cfg.sponge_strength * r * r;
}

// c u_xx - a u at sample i (i >= 1) of one branch.
double rhs_at(const VectorXd& u, Index i, double c, double a, double dx, BoundaryKind boundary) {
  const Index last = u.size() - 1;
  if (i == last) {
    if (boundary != BoundaryKind::neumann) return 0.0;
    return c * 2.0 * (u(last - 1) - u(last)) / (dx * dx) - a * u(last);
  }
  return c * (u(i + 1) - 2.0 * u(i) + u(i - 1)) / (dx * dx) - a * u(i);
}

double node_value(const std::vector<VectorXd>& u, const StarNetwork& net, NodeScheme scheme) {
  double num = 0.0;
  double den = 0.0;
  for (int k = 0; k < net.size(); ++k) {
    const VectorXd& v = u[static_cast<std::size_t>(k)];
    const double c = net.speed(k);
    if (scheme == NodeScheme::first_order || v.size() < 3) {
      num += c * v(1);
      den += c;
    } else {
      num += c * (4.0 * v(1) - v(2));
      den += 3.0 * c;
    }
  }
  return num / den;
}

void set_node(std::vector<VectorXd>& u, double value) {
  for (auto& v : u) v(0) = value;
}

std::vector<VectorXd> real_parts(const NetworkFunction& f) {
  std::vector<VectorXd> out;
  for (int k = 0; k < f.branches(); ++k) out.push_back(f.values(k).real());
  return out;
}

}  // namespace

SpatialGrid FdtdConfig::grid() const {
  SpatialGrid g;
  for (double l : lengths) g.push_back(BranchGrid{dx, l});
  return g;
}

void FdtdConfig::check(const StarNetwork& net) const {
  if (static_cast<int>(lengths.size()) != net.size()) throw Error("branch count mismatch");
  if (!(dx > 0.0) || !(dt > 0.0)) throw Error("dx and dt must be positive");
  if (dt > 0.9 * dx / max_root_speed(net) * (1.0 + 1e-12)) throw Error("CFL violation: dt > 0.9 dx / max sqrt(c)");
  for (double l : lengths) {
    if (!(l >= 4.0 * dx)) throw Error("branch too short for the grid");
    if (boundary == BoundaryKind::sponge && sponge_width >= l) throw Error("sponge wider than the branch");
  }
  if (boundary == BoundaryKind::sponge && sponge_width < 10.0 * dx * (1.0 - 1e-12)) {
    throw Error("sponge narrower than 10 dx");
  }
}

FdtdConfig make_fdtd_config(const StarNetwork& net, double dx, double length, double cfl,
                            BoundaryKind boundary) {
  FdtdConfig cfg;
  cfg.dx = dx;
  cfg.dt = cfl * dx / max_root_speed(net);
  cfg.lengths.assign(static_cast<std::size_t>(net.size()), length);
  cfg.boundary = boundary;
  cfg.sponge_width = std::max(cfg.sponge_width, 10.0 * dx);
  return cfg;
}

FdtdState fdtd_init(const StarNetwork& net, const FdtdConfig& cfg, const NetworkFunction& u0,
                    const NetworkFunction& v0) {
  cfg.check(net);
  if (u0.grid() != cfg.grid() || v0.grid() != cfg.grid()) throw Error("grid mismatch");
  FdtdState s;
  s.current = real_parts(u0);
  const std::vector<VectorXd> v = real_parts(v0);
  s.previous = s.current;
  for (int k = 0; k < net.size(); ++k) {
    const std::size_t kk = static_cast<std::size_t>(k);
    const VectorXd& u = s.current[kk];
    VectorXd& p = s.previous[kk];
    for (Index i = 1; i < u.size(); ++i) {
      const double acc = rhs_at(u, i, net.speed(k), net.potential(k), cfg.dx, cfg.boundary);
      p(i) = u(i) - cfg.dt * v[kk](i) + 0.5 * cfg.dt * cfg.dt * acc;
    }
    if (cfg.boundary != BoundaryKind::neumann) p(p.size() - 1) = 0.0;
  }
  set_node(s.previous, node_value(s.previous, net, cfg.node));
  return s;
}

void fdtd_advance(FdtdState& state, const StarNetwork& net, const FdtdConfig& cfg) {
  const double dt2 = cfg.dt * cfg.dt;
  parallel_for(net.size(), [&](std::ptrdiff_t kk) {
    const int k = static_cast<int>(kk);
    const VectorXd& u = state.current[static_cast<std::size_t>(k)];
    VectorXd& p = state.previous[static_cast<std::size_t>(k)];
    const double length = cfg.lengths[static_cast<std::size_t>(k)];
    const Index last = u.size() - 1;
    // p holds u^{n-1} and is overwritten in place by u^{n+1}.
    for (Index i = 1; i <= last; ++i) {
      if (i == last && cfg.boundary != BoundaryKind::neumann) {
        p(i) = 0.0;
        continue;
      }
      const double acc = rhs_at(u, i, net.speed(k), net.potential(k), cfg.dx, cfg.boundary);
      const double half = 0.5 * cfg.dt * damping(cfg, static_cast<double>(i) * cfg.dx, length);
      p(i) = (2.0 * u(i) - (1.0 - half) * p(i) + dt2 * acc) / (1.0 + half);
    }
  });
  std::swap(state.previous, state.current);
  set_node(state.current, node_value(state.current, net, cfg.node));
  state.time += cfg.dt;
  ++state.steps;
}

FdtdState fdtd_step(const FdtdState& state, const StarNetwork& net, const FdtdConfig& cfg) {
  FdtdState next = state;
  fdtd_advance(next, net, cfg);
  return next;
}

double fdtd_energy(const FdtdState& state, const StarNetwork& net, const FdtdConfig& cfg) {
  double e = 0.0;
  for (int k = 0; k < net.size(); ++k) {
    const VectorXd& u = state.current[static_cast<std::size_t>(k)];
    const VectorXd& p = state.previous[static_cast<std::size_t>(k)];
    const double c = net.speed(k);
    const double a = net.potential(k);
    const Index last = u.size() - 1;
    double kinetic = 0.0;
    double mass = 0.0;
    double strain = 0.0;
    for (Index i = 0; i <= last; ++i) {
      const double h = (i == 0 || i == last) ? 0.5 * cfg.dx : cfg.dx;
      const double vt = (u(i) - p(i)) / cfg.dt;
      kinetic += h * vt * vt;
      mass += h * u(i) * p(i);
      if (i < last) strain += (u(i + 1) - u(i)) * (p(i + 1) - p(i)) / cfg.dx;
    }
    e += kinetic + c * strain + a * mass;
  }
  return e;
}

double fdtd_node_flux(const FdtdState& state, const StarNetwork& net, const FdtdConfig& cfg) {
  double flux = 0.0;
  for (int k = 0; k < net.size(); ++k) {
    const VectorXd& u = state.current[static_cast<std::size_t>(k)];
    flux += net.speed(k) * (-3.0 * u(0) + 4.0 * u(1) - u(2)) / (2.0 * cfg.dx);
  }
  return flux;
}

NetworkFunction fdtd_solution(const FdtdState& state, const FdtdConfig& cfg) {
  std::vector<VectorXcd> values;
  for (const auto& v : state.current) values.push_back(v.cast<Complex>());
  return NetworkFunction(cfg.grid(), std::move(values));
}

FdtdRun fdtd_run(const StarNetwork& net, const FdtdConfig& cfg, const NetworkFunction& u0,
                 const NetworkFunction& v0, double T) {
  FdtdConfig local = cfg;
  const long steps = std::max(1L, static_cast<long>(std::ceil(T / cfg.dt - 1e-9)));
  local.dt = T / static_cast<double>(steps);
  FdtdRun run;
  run.state = fdtd_init(net, local, u0, v0);
  run.initial_energy = fdtd_energy(run.state, net, local);
  double last = run.initial_energy;
  for (long s = 0; s < steps; ++s) {
    fdtd_advance(run.state, net, local);
    const double e = fdtd_energy(run.state, net, local);
    if (run.initial_energy > 0.0) {
      run.max_relative_drift = std::max(run.max_relative_drift, std::abs(e - run.initial_energy) / run.initial_energy);
    }
    if (e > last * (1.0 + 1e-12) + 1e-300) run.energy_monotone = false;
    last = e;
    run.max_node_flux = std::max(run.max_node_flux, std::abs(fdtd_node_flux(run.state, net, local)));
  }
  run.state.time = T;
  return run;
}

double causality_window(const StarNetwork& net, const FdtdConfig& cfg, double extent) {
  double room = std::numeric_limits<double>::infinity();
  for (double l : cfg.lengths) {
    room = std::min(room, l - (cfg.boundary == BoundaryKind::sponge ? cfg.sponge_width : 0.0));
  }
  return std::max(0.0, (room - extent) / max_root_speed(net));
}

NetworkFunction dalembert_reference(const StarNetwork& net, const SpatialGrid& grid,
                                    const std::function<double(double)>& u0_line, double t) {
  if (net.size() != 2 || net.speed(0) != net.speed(1) || net.potential(0) != 0.0 ||
      net.potential(1) != 0.0) {
    throw Error("d'Alembert reference needs two equal-speed branches without potential");
  }
  const double shift = std::sqrt(net.speed(0)) * t;
  return NetworkFunction::sample(grid, [&](int k, double x) {
    const double X = k == net.internal_index(0) ? -x : x;
    return Complex(0.5 * (u0_line(X - shift) + u0_line(X + shift)), 0.0);
  });
}

Scattering measure_scattering(int n, double dx, NodeScheme scheme) {
  std::vector<BranchSpec> specs(static_cast<std::size_t>(n), BranchSpec{1.0, 0.0});
  const StarNetwork net = StarNetwork::validate(specs);
  FdtdConfig cfg = make_fdtd_config(net, dx, 30.0, 0.5);
  cfg.node = scheme;
  const double x0 = 10.0;
  const double sigma = 0.7;
  auto g = [&](double x) { return std::exp(-((x - x0) / sigma) * ((x - x0) / sigma)); };
  auto dg = [&](double x) { return -2.0 * (x - x0) / (sigma * sigma) * g(x); };
  const SpatialGrid grid = cfg.grid();
  const NetworkFunction u0 = NetworkFunction::sample(grid, [&](int k, double x) { return Complex(k == 0 ? g(x) : 0.0, 0.0); });
  const NetworkFunction v0 = NetworkFunction::sample(grid, [&](int k, double x) { return Complex(k == 0 ? dg(x) : 0.0, 0.0); });
  const FdtdRun run = fdtd_run(net, cfg, u0, v0, 2.0 * x0);
  auto peak = [&](int k) {
    const VectorXd& v = run.state.current[static_cast<std::size_t>(k)];
    double best = 0.0;
    for (Index i = 0; i < v.size(); ++i) {
      const double x = static_cast<double>(i) * dx;
      if (x > 0.5 * x0 && x < 1.5 * x0 && std::abs(v(i)) > std::abs(best)) best = v(i);
    }
    return best;
  };
  return Scattering{peak(0), peak(1)};
}

}  // namespace starwave
