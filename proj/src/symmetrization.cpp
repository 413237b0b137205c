#include "starwave/symmetrization.hpp"

#include <cmath>

#include "starwave/eigenbasis.hpp"

namespace starwave {

namespace {

const Complex I(0.0, 1.0);

EigenParams<double> params_at(const StarNetwork& net, double lambda) {
  return eigen_params<double>(net, Complex(lambda, 0.0), Sign::minus);
}

std::vector<double> default_anchors(const EigenParams<double>& p) {
  std::vector<double> x(static_cast<std::size_t>(p.size()), 0.0);
  for (int j = 1; j < p.size(); ++j) {
    const Complex xi = p.xi[static_cast<std::size_t>(j)];
    if (std::abs(xi.imag()) <= std::abs(xi.real())) {
      x[static_cast<std::size_t>(j)] = std::numbers::pi / (2.0 * xi.real());
    } else {
      x[static_cast<std::size_t>(j)] = 1.0 / p.xi_prime[static_cast<std::size_t>(j)].real();
    }
  }
  return x;
}

AnchorFrame search(const StarNetwork& net, double lambda, std::mt19937_64& rng, int max_attempts,
                   bool randomize_first) {
  const auto p = params_at(net, lambda);
  const std::vector<double> base = default_anchors(p);
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  AnchorFrame frame;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    std::vector<double> x = base;
    if (attempt > 1 || randomize_first) {
      for (std::size_t j = 1; j < x.size(); ++j) x[j] *= scale(rng);
    }
    frame = anchor_frame(net, lambda, std::move(x));
    frame.attempts = attempt;
    if (admissible(frame)) break;
  }
  return frame;
}

}  // namespace

ImCase im_case(int p, int j, int k) {
  const bool jp = j < p;
  const bool kp = k < p;
  if (!jp && !kp) return ImCase::a;
  if (jp && kp) return j == k ? ImCase::b_diag : ImCase::b_offdiag;
  return jp ? ImCase::c : ImCase::d;
}

double im_kernel_cases(const StarNetwork& net, double lambda, int j, int k, double x, double x_prime) {
  const int p = band_index(net, lambda);
  const auto e = params_at(net, lambda);
  const Complex inv_w = 1.0 / e.w;
  const double im_w = inv_w.imag();
  const double re_w = inv_w.real();
  const double im_iw = (1.0 / (I * e.w)).imag();
  const double xj = e.xi[static_cast<std::size_t>(j)].real();
  const double xk = e.xi[static_cast<std::size_t>(k)].real();
  const double dj = e.xi_prime[static_cast<std::size_t>(j)].real();
  const double dk = e.xi_prime[static_cast<std::size_t>(k)].real();
  switch (im_case(p, j, k)) {
    case ImCase::a:
      return im_w * std::exp(-dj * x - dk * x_prime);
    case ImCase::b_offdiag:
    case ImCase::b_diag: {
      const double ss = im_case(p, j, k) == ImCase::b_diag ? (e.s_at(k) * inv_w).imag() : im_w;
      return im_w * std::cos(xj * x) * std::cos(xk * x_prime) -
             ss * std::sin(xj * x) * std::sin(xk * x_prime) -
             re_w * std::cos(xj * x) * std::sin(xk * x_prime) -
             re_w * std::sin(xj * x) * std::cos(xk * x_prime);
    }
    case ImCase::c:
      return std::exp(-dk * x_prime) * (im_w * std::cos(xj * x) + im_iw * std::sin(xj * x));
    case ImCase::d:
      return std::exp(-dj * x) * (im_w * std::cos(xk * x_prime) + im_iw * std::sin(xk * x_prime));
  }
  return 0.0;
}

double im_kernel_direct(const StarNetwork& net, double lambda, int j, int k, double x, double x_prime) {
  const auto e = params_at(net, lambda);
  const int next = (j + 1) % net.size();
  return (eval_F(e, next, BranchPoint{j, x}) * eval_F(e, j, BranchPoint{k, x_prime}) / e.w).imag();
}

QMatrix q_closed_form(const StarNetwork& net, double lambda) {
  const int n = net.size();
  const auto e = params_at(net, lambda);
  QMatrix q{lambda, MatrixXcd::Zero(n, n), false};
  const double w2 = std::norm(e.w);
  for (int l = 0; l < n; ++l) {
    if (lambda > net.potential(l)) q.entries(l, l) = net.speed(l) * e.xi[static_cast<std::size_t>(l)].real() / w2;
  }
  return q;
}

LinearSystem assemble_system(const StarNetwork& net, double lambda) {
  const int n = net.size();
  const int p = band_index(net, lambda);
  const auto e = params_at(net, lambda);
  const double im_w = (1.0 / e.w).imag();
  const double im_iw = (1.0 / (I * e.w)).imag();
  LinearSystem sys{MatrixXcd::Zero(4 * n * n, n * n), VectorXcd::Zero(4 * n * n)};
  Index row = 0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      // One constraint: coefficients on q_jk, the rest of row j, the rest of
      // column k and everything else.
      auto add = [&](Complex jk, Complex own_row, Complex own_col, Complex rest, Complex rhs) {
        for (int l = 0; l < n; ++l) {
          for (int m = 0; m < n; ++m) {
            Complex v = rest;
            if (l == j && m == k) v = jk;
            else if (l == j) v = own_row;
            else if (m == k) v = own_col;
            sys.matrix(row, l * n + m) = v;
          }
        }
        sys.rhs(row) = rhs;
        ++row;
      };
      switch (im_case(p, j, k)) {
        case ImCase::a:
          add(1, 0, 0, 0, 0);
          add(0, 0, 1, 0, 0);
          add(0, 1, 0, 0, 0);
          add(0, 0, 0, 1, im_w);
          break;
        case ImCase::b_offdiag:
        case ImCase::b_diag: {
          const Complex sj = e.s_at(j);
          const Complex sk = std::conj(e.s_at(k));
          const double second = j == k ? (sj / e.w).imag() : im_w;
          add(1, 1, 1, 1, im_w);
          add(sj * sk, sj, sk, 1, -second);
          add(sk, 1, sk, 1, -I * im_iw);
          add(sj, sj, 1, 1, I * im_iw);
          break;
        }
        case ImCase::c: {
          const Complex sj = e.s_at(j);
          add(1, 0, 0, 0, 0);
          add(0, 0, 1, 0, 0);
          add(0, 1, 0, 1, im_w);
          add(0, sj, 0, 1, I * im_iw);
          break;
        }
        case ImCase::d: {
          const Complex sk = std::conj(e.s_at(k));
          add(1, 0, 0, 0, 0);
          add(0, 0, 1, 1, im_w);
          add(0, 1, 0, 0, 0);
          add(0, 0, sk, 1, -I * im_iw);
          break;
        }
      }
    }
  }
  return sys;
}

LeastSquaresResult solve_q_leastsquares(const StarNetwork& net, double lambda) {
  const int n = net.size();
  const LinearSystem sys = assemble_system(net, lambda);
  Eigen::CompleteOrthogonalDecomposition<MatrixXcd> cod(sys.matrix);
  cod.setThreshold(1e-10);
  const VectorXcd sol = cod.solve(sys.rhs);
  LeastSquaresResult r;
  r.q = QMatrix{lambda, MatrixXcd(n, n), false};
  for (int l = 0; l < n; ++l) {
    for (int m = 0; m < n; ++m) r.q.entries(l, m) = sol(l * n + m);
  }
  r.residual = (sys.matrix * sol - sys.rhs).cwiseAbs().maxCoeff();
  r.gap = (r.q.entries - q_closed_form(net, lambda).entries).cwiseAbs().maxCoeff();
  r.rank = cod.rank();
  r.rank_deficient = r.rank < n * n;
  return r;
}

AnchorFrame anchor_frame(const StarNetwork& net, double lambda, std::vector<double> x) {
  const int n = net.size();
  if (static_cast<int>(x.size()) != n || x[0] != 0.0) throw Error("anchor list must start at the node");
  const auto e = params_at(net, lambda);
  AnchorFrame f;
  f.x = std::move(x);
  f.D = MatrixXcd(n, n);
  f.C = MatrixXcd::Zero(n, n);
  f.alpha = VectorXcd::Ones(n);
  f.beta = VectorXcd::Ones(n);
  for (int j = 0; j < n; ++j) {
    const double xj = f.x[static_cast<std::size_t>(j)];
    for (int k = 0; k < n; ++k) f.D(k, j) = eval_F(e, k, BranchPoint{j, xj});
    if (j > 0) {
      const Complex xi = e.xi[static_cast<std::size_t>(j)];
      f.alpha(j) = std::exp(-I * xi * xj);
      f.beta(j) = std::cos(xi * xj) - I * e.s_at(j) * std::sin(xi * xj);
    }
    f.C(j, j) = I * f.alpha(j);
  }
  Eigen::JacobiSVD<MatrixXcd> svd(f.D);
  const auto& sv = svd.singularValues();
  f.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  return f;
}

bool admissible(const AnchorFrame& frame) {
  for (Index j = 1; j < frame.alpha.size(); ++j) {
    if (std::abs(frame.beta(j) - frame.alpha(j)) < anchor_threshold) return false;
  }
  return frame.condition <= anchor_max_condition;
}

AnchorFrame choose_anchors(const StarNetwork& net, double lambda, std::mt19937_64& rng, int max_attempts) {
  return search(net, lambda, rng, max_attempts, false);
}

AnchorFrame random_anchors(const StarNetwork& net, double lambda, std::mt19937_64& rng, int max_attempts) {
  return search(net, lambda, rng, max_attempts, true);
}

QMatrix q_direct(const StarNetwork& net, double lambda, const AnchorFrame& frame) {
  if (!(frame.condition <= anchor_max_condition)) throw Error("ill-conditioned anchor frame");
  const auto e = params_at(net, lambda);
  const MatrixXcd rhs = ((-I / e.w) * (frame.C * frame.D)).imag().cast<Complex>();
  const MatrixXcd left = frame.D.transpose().partialPivLu().solve(rhs);
  // left * conj(D)^{-1} = (conj(D)^{-T} left^T)^T
  const MatrixXcd q = frame.D.conjugate().transpose().partialPivLu().solve(left.transpose()).transpose();
  return QMatrix{lambda, q, false};
}

}  // namespace starwave
