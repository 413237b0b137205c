#pragma once

#include <Eigen/Dense>

namespace starwave {

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Newton iteration on P_m from the Chebyshev-like initial guesses; cached per m.
const GaussLegendre& gauss_legendre(int m);

}  // namespace starwave
