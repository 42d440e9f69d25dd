#include "becsim/epr_witness.hpp"

#include <cmath>
#include <stdexcept>

#include "becsim/parallel.hpp"

namespace becsim {

namespace {

// Tridiagonal coupling t_j = sqrt((j+1)(N-j)), the off-diagonal of S^x/S^y.
double hop(int j, int n) { return std::sqrt(double(j + 1) * double(n - j)); }

// (S^x_1 psi)(k, l) = t_{k-1} psi(k-1, l) + t_k psi(k+1, l)
Eigen::MatrixXcd apply_sx1(const Eigen::MatrixXcd& psi, int n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(psi.rows(), psi.cols());
  for (int k = 0; k <= n; ++k) {
    if (k > 0) out.row(k) += hop(k - 1, n) * psi.row(k - 1);
    if (k < n) out.row(k) += hop(k, n) * psi.row(k + 1);
  }
  return out;
}

// (S^y_1 psi)(k, l) = -i t_{k-1} psi(k-1, l) + i t_k psi(k+1, l)
Eigen::MatrixXcd apply_sy1(const Eigen::MatrixXcd& psi, int n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(psi.rows(), psi.cols());
  const Complex im(0.0, 1.0);
  for (int k = 0; k <= n; ++k) {
    if (k > 0) out.row(k) -= im * hop(k - 1, n) * psi.row(k - 1);
    if (k < n) out.row(k) += im * hop(k, n) * psi.row(k + 1);
  }
  return out;
}

Eigen::MatrixXcd apply_sz1(const Eigen::MatrixXcd& psi, int n) {
  Eigen::MatrixXcd out = psi;
  for (int k = 0; k <= n; ++k) out.row(k) *= (2.0 * k - n);
  return out;
}

Eigen::MatrixXcd apply_sx2(const Eigen::MatrixXcd& psi, int n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(psi.rows(), psi.cols());
  for (int l = 0; l <= n; ++l) {
    if (l > 0) out.col(l) += hop(l - 1, n) * psi.col(l - 1);
    if (l < n) out.col(l) += hop(l, n) * psi.col(l + 1);
  }
  return out;
}

Eigen::MatrixXcd apply_sy2(const Eigen::MatrixXcd& psi, int n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(psi.rows(), psi.cols());
  const Complex im(0.0, 1.0);
  for (int l = 0; l <= n; ++l) {
    if (l > 0) out.col(l) -= im * hop(l - 1, n) * psi.col(l - 1);
    if (l < n) out.col(l) += im * hop(l, n) * psi.col(l + 1);
  }
  return out;
}

Eigen::MatrixXcd apply_sz2(const Eigen::MatrixXcd& psi, int n) {
  Eigen::MatrixXcd out = psi;
  for (int l = 0; l <= n; ++l) out.col(l) *= (2.0 * l - n);
  return out;
}

double inner_real(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

}  // namespace

MomentReport collective_moments(const TwoBecPureState& s) {
  const int n = s.n;
  const Eigen::MatrixXcd& psi = s.psi;
  if (std::abs(s.norm() - 1.0) > 1e-8) {
    throw std::invalid_argument("collective_moments: state not normalized");
  }

  MomentReport rep;
  rep.sx1 = inner_real(psi, apply_sx1(psi, n));
  rep.sx2 = inner_real(psi, apply_sx2(psi, n));

  // A = S^y_1 - S^z_2 applied to psi; <A^2> = |A psi|^2 since A is Hermitian.
  const Eigen::MatrixXcd phi_a = apply_sy1(psi, n) - apply_sz2(psi, n);
  const double mean_a = inner_real(psi, phi_a);
  rep.var_a = phi_a.squaredNorm() - mean_a * mean_a;

  const Eigen::MatrixXcd phi_b = apply_sy2(psi, n) - apply_sz1(psi, n);
  const double mean_b = inner_real(psi, phi_b);
  rep.var_b = phi_b.squaredNorm() - mean_b * mean_b;
  return rep;
}

WitnessResult witness_from_moments(const MomentReport& m) {
  WitnessResult w;
  w.lhs = m.var_a + m.var_b;
  w.rhs = 2.0 * m.sx1 + 2.0 * m.sx2;
  w.margin = w.lhs - w.rhs;
  w.entangled_flag = w.margin < 0.0;
  return w;
}

WitnessResult evaluate_witness(const TwoBecPureState& s) {
  return witness_from_moments(collective_moments(s));
}

CvPrediction cv_prediction(BosonNumber n, double tau) {
  if (tau < 0.0) throw std::invalid_argument("cv_prediction: tau must be >= 0");
  const double N = n.value();
  const double u = 1.0 - 2.0 * N * tau;
  return {tau, N * u * u + N};
}

std::vector<WitnessScanRecord> witness_scan(BosonNumber n, std::span<const double> tau_grid,
                                            int threads) {
  const TwoBecPureState base = initial_xx_state(n);
  std::vector<WitnessScanRecord> records(tau_grid.size());
  parallel_for_blocks(tau_grid.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double tau = tau_grid[i];
      if (!std::isfinite(tau) || tau < 0.0) {
        throw std::invalid_argument("witness_scan: tau must be finite and >= 0");
      }
      const TwoBecPureState evolved = evolve_zz(base, tau);
      records[i] = {tau, evaluate_witness(evolved), cv_prediction(n, tau)};
    }
  });
  return records;
}

}  // namespace becsim
