#pragma once

#include <span>
#include <vector>

#include "starwave/eigenbasis.hpp"
#include "starwave/network.hpp"

namespace starwave {

struct KernelQuery {
  BranchPoint x;
  BranchPoint x_prime;
  Complex lambda;
};

/// Sign used by the kernel at lambda: plus iff Im lambda > 0. Real lambda is
/// the boundary value from below.
inline Sign kernel_sign(Complex lambda) { return lambda.imag() > 0.0 ? Sign::plus : Sign::minus; }

/// Parameters for the kernel at lambda; throws at the zero of the Wronskian.
EigenParams<double> kernel_params(const StarNetwork& net, Complex lambda);

/// Resolvent kernel K(x, x', lambda) for precomputed parameters.
Complex kernel_K(const EigenParams<double>& p, BranchPoint x, BranchPoint x_prime);
Complex kernel_K(const StarNetwork& net, const KernelQuery& q);

enum class ResolventMethod {
  cumulative,  // running sums from both branch ends, O(samples)
  direct,      // kernel quadrature at every output point, O(samples^2)
};

/// R(lambda) f by quadrature of the kernel; the output grid equals the input grid.
/// The cumulative path integrates with a fourth-order interval rule and ignores
/// the kind of `rule`; the direct path uses the weights of `rule`.
NetworkFunction apply_resolvent(const StarNetwork& net, const NetworkFunction& f, Complex lambda,
                                const QuadratureRule& rule,
                                ResolventMethod method = ResolventMethod::cumulative);

/// ||(lambda - A_h) u - f|| / ||f|| over interior samples (node and far ends
/// excluded), with A_h from apply_operator_fd.
double resolvent_residual(const StarNetwork& net, const NetworkFunction& f,
                          const NetworkFunction& u, Complex lambda, const QuadratureRule& rule);

struct KernelSample {
  BranchPoint x;
  BranchPoint x_prime;
  double eps = 0.0;  // in (0, delta)
};

struct LimitingAbsorptionReport {
  double M = 0.0;
  double N = 0.0;
  double gamma = 0.0;
  double worst_bound_ratio = 0.0;  // max |K| / (N e^{gamma (x + x')})
  bool bound_holds = false;
  std::vector<double> cauchy;  // max_samples |K(lambda - i delta 2^-m) - K(lambda)|, m = 0..levels
  bool converged = false;      // last entry below 1e-10
};

/// Checks the limiting-absorption bound and the boundary-value limit of the
/// kernel from below at real lambda >= a_1.
LimitingAbsorptionReport limiting_absorption_check(const StarNetwork& net, double lambda,
                                                   double delta,
                                                   std::span<const KernelSample> samples,
                                                   int levels = 40);

}  // namespace starwave
