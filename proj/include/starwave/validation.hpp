#pragma once

// Property and oracle suites behind `starwave validate`. Every suite is
// deterministic for a given seed and independent of the thread count.

#include <cstdint>
#include <string>
#include <vector>

#include "starwave/io.hpp"
#include "starwave/network.hpp"

namespace starwave {

/// Reference networks 'A' (c=(1,1,1), a=0), 'B' (c=(1,1), a=(0,3)) and
/// 'C' (c=(1,2,1), a=(0,1,4)).
StarNetwork reference_network(char name);

/// C-infinity bump exp(-1 / (1 - t^2)), t = (x - center) / radius.
double smooth_bump(double x, double center, double radius);

/// Gaussian exp(-((x - center) / width)^2) tapered by a bump of radius
/// min(center, 4 width): compactly supported, smooth, and with a fast
/// decaying spectrum.
double smooth_pulse(double x, double center, double width);

struct SuiteOptions {
  std::uint64_t seed = 7;
  int trials = 0;  // 0 keeps each suite's default
};

/// eigen, wronskian, resolvent, limiting, imkernel, symmetrization,
/// plancherel, inversion, diagonalization, dalembert, fdtd, tunnel, domain.
const std::vector<std::string>& suite_names();

/// {"suite", "pass", "metrics", ...}. "all" runs every suite and nests the
/// reports under "suites". Throws Error for an unknown name.
Json run_suite(const std::string& name, const SuiteOptions& options = {});

/// FDTD against spectral evolution for data smoothly windowed to
/// band (lo, hi): relative L2 gap at time t, energy drift, causality window.
Json oracle_compare(const StarNetwork& net, double dx, double length, double t, double lo, double hi);

}  // namespace starwave
