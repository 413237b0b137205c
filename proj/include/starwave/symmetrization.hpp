#pragma once

// Cross-checks of the spectral density q: the closed form, the least-squares
// solution of the stacked Im-kernel identities, and the anchor-frame matrix
// formula. Everything here uses the unnormalized density (kappa = 1).

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "starwave/network.hpp"

namespace starwave {

using MatrixXcd = Eigen::MatrixXcd;

enum class ImCase { a, b_offdiag, b_diag, c, d };

/// Case of the pair (j, k) for lambda in band p (0-based branches; branch l
/// propagates iff l < p).
ImCase im_case(int p, int j, int k);

/// Im[(1/w) (F^{-,j+1})_j(x) (F^{-,j})_k(x')] from the closed-form case
/// expressions. x lies on branch j, x' on branch k.
double im_kernel_cases(const StarNetwork& net, double lambda, int j, int k, double x, double x_prime);
/// Same quantity by evaluating the eigenfunctions.
double im_kernel_direct(const StarNetwork& net, double lambda, int j, int k, double x, double x_prime);

struct QMatrix {
  double lambda = 0.0;
  MatrixXcd entries;
  bool normalized = false;
};

/// delta_lm 1_{lambda > a_l} c_l xi_l / |w|^2.
QMatrix q_closed_form(const StarNetwork& net, double lambda);

/// Linear constraints on the n^2 unknowns q_lm (column index l * n + m),
/// four rows per pair (j, k).
struct LinearSystem {
  MatrixXcd matrix;
  VectorXcd rhs;
};
LinearSystem assemble_system(const StarNetwork& net, double lambda);

struct LeastSquaresResult {
  QMatrix q;
  double residual = 0.0;  // ||M q - rhs||_inf
  double gap = 0.0;       // max |q - closed form|
  Index rank = 0;
  bool rank_deficient = false;
};
LeastSquaresResult solve_q_leastsquares(const StarNetwork& net, double lambda);

struct AnchorFrame {
  std::vector<double> x;  // x[0] = 0 is the node
  MatrixXcd D;            // column j is F_lambda(x_j)
  MatrixXcd C;
  VectorXcd alpha;
  VectorXcd beta;
  double condition = 0.0;
  int attempts = 0;
};

inline constexpr double anchor_threshold = 1e-6;
inline constexpr double anchor_max_condition = 1e10;

/// Frame at explicit anchors (x[0] must be 0); no admissibility check.
AnchorFrame anchor_frame(const StarNetwork& net, double lambda, std::vector<double> x);
/// Default anchors (pi / (2 xi_j) or 1 / xi'_j), re-drawn from [0.5, 2] x_j
/// until |beta_j - alpha_j| >= anchor_threshold and cond(D) <= anchor_max_condition.
AnchorFrame choose_anchors(const StarNetwork& net, double lambda, std::mt19937_64& rng,
                           int max_attempts = 5);
/// Like choose_anchors but every anchor is drawn at random from [0.5, 2] x_j.
AnchorFrame random_anchors(const StarNetwork& net, double lambda, std::mt19937_64& rng,
                           int max_attempts = 20);
bool admissible(const AnchorFrame& frame);

/// (D^T)^{-1} Im(-i/w C D) conj(D)^{-1}. Throws "ill-conditioned anchor
/// frame" when cond(D) exceeds anchor_max_condition.
QMatrix q_direct(const StarNetwork& net, double lambda, const AnchorFrame& frame);

}  // namespace starwave
