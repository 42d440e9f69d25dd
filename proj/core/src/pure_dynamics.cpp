#include "becsim/pure_dynamics.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>

#include "becsim/errors.hpp"
#include "becsim/parallel.hpp"

namespace becsim {

namespace {

constexpr double kSigmaFloor = 1e-12;  // singular values below this are noise
constexpr int kMap2dMaxN = 200;
constexpr int kMap2dMaxStepsPerAxis = 500;

double entropy_from_singular_values(const Eigen::VectorXd& sigma) {
  double e = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] < kSigmaFloor) continue;
    const double p = std::min(sigma[i] * sigma[i], 1.0);
    if (p > 0.0) e -= p * std::log2(p);
  }
  return e;
}

}  // namespace

double TwoBecPureState::norm() const { return psi.norm(); }

RationalGateTime::RationalGateTime(long long m, long long d) : m_(m), d_(d) {
  if (m < 1 || d < 1) {
    throw std::invalid_argument("RationalGateTime: m and d must be >= 1");
  }
  const long long g = std::gcd(m_, d_);
  m_ /= g;
  d_ /= g;
}

double RationalGateTime::tau() const {
  return double(m_) * std::numbers::pi / (4.0 * double(d_));
}

TwoBecPureState initial_xx_state(BosonNumber n) {
  const Eigen::VectorXcd c = coherent_to_fock(plus_x_state(), n);
  TwoBecPureState s{n.value(), c * c.transpose()};
  return s;
}

TwoBecPureState evolve_zz(const TwoBecPureState& s, double tau) {
  const int N = s.n;
  TwoBecPureState out{N, s.psi};
  for (int k = 0; k <= N; ++k) {
    const double sk = 2.0 * k - N;
    for (int l = 0; l <= N; ++l) {
      const double sl = 2.0 * l - N;
      out.psi(k, l) *= std::polar(1.0, -sk * sl * tau);
    }
  }
  return out;
}

TwoBecPureState evolve_xz(const TwoBecPureState& s, double tau_prime) {
  const int N = s.n;
  const XEigensystem& xs = x_eigendecomposition(BosonNumber(N));
  Eigen::MatrixXcd y = xs.eigenvectors.adjoint() * s.psi;
  for (int j = 0; j <= N; ++j) {
    const double lam = xs.eigenvalues[j];
    for (int l = 0; l <= N; ++l) {
      const double sl = 2.0 * l - N;
      y(j, l) *= std::polar(1.0, -lam * sl * tau_prime);
    }
  }
  return {N, xs.eigenvectors * y};
}

TwoBecPureState apply_gate(const TwoBecPureState& s, const GateSpec& gate) {
  switch (gate.axis_pair) {
    case GateSpec::AxisPair::ZZ: return evolve_zz(s, gate.tau);
    case GateSpec::AxisPair::XZ: return evolve_xz(s, gate.tau);
  }
  throw std::invalid_argument("apply_gate: unknown axis pair");
}

double entanglement_entropy(const TwoBecPureState& s) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(s.psi);
  if (svd.info() != Eigen::Success) {
    throw NumericalError("entanglement_entropy: SVD failed for N = " + std::to_string(s.n));
  }
  return entropy_from_singular_values(svd.singularValues());
}

Eigen::MatrixXcd reduced_density_bec1(const TwoBecPureState& s) {
  return s.psi * s.psi.adjoint();
}

double rational_dip_entropy(const RationalGateTime& t) {
  // Smallest q >= 1 with q*m = 0 (mod 2d); the number of distinct equatorial
  // positions visited by the coherent-state fan.
  const long long two_d = 2 * t.d();
  const long long q = two_d / std::gcd(t.m(), two_d);
  return std::log2(double(q));
}

CharacteristicTimes characteristic_times(BosonNumber n) {
  const double N = n.value();
  return {std::numbers::pi / (4.0 * N), 1.0 / std::sqrt(2.0 * N), std::numbers::pi / 4.0};
}

std::vector<EntanglementRecord> scan_entropy(BosonNumber n, std::span<const double> tau_grid,
                                             int threads) {
  const double emax = std::log2(double(n.dim()));
  const TwoBecPureState base = initial_xx_state(n);
  std::vector<EntanglementRecord> records(tau_grid.size());
  parallel_for_blocks(tau_grid.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double tau = tau_grid[i];
      if (!std::isfinite(tau)) {
        throw std::invalid_argument("scan_entropy: non-finite tau in grid");
      }
      records[i] = {tau, std::nullopt, entanglement_entropy(evolve_zz(base, tau)), emax};
    }
  });
  return records;
}

EntropyMap2d map2d_entropy(BosonNumber n, std::span<const double> tau_grid,
                           std::span<const double> tau_prime_grid, int threads,
                           bool override_budget) {
  if (!override_budget) {
    if (n.value() > kMap2dMaxN) {
      std::ostringstream os;
      os << "map2d_entropy: N = " << n.value() << " exceeds the default budget N <= "
         << kMap2dMaxN << " (override to proceed)";
      throw ResourceError(os.str());
    }
    if (int(tau_grid.size()) > kMap2dMaxStepsPerAxis ||
        int(tau_prime_grid.size()) > kMap2dMaxStepsPerAxis) {
      std::ostringstream os;
      os << "map2d_entropy: grid " << tau_grid.size() << " x " << tau_prime_grid.size()
         << " exceeds the default budget of " << kMap2dMaxStepsPerAxis
         << " points per axis (override to proceed)";
      throw ResourceError(os.str());
    }
  }
  for (double t : tau_grid) {
    if (!std::isfinite(t)) throw std::invalid_argument("map2d_entropy: non-finite tau");
  }
  for (double t : tau_prime_grid) {
    if (!std::isfinite(t)) throw std::invalid_argument("map2d_entropy: non-finite tau_prime");
  }

  const int N = n.value();
  const double emax = std::log2(double(n.dim()));
  const XEigensystem& xs = x_eigendecomposition(n);
  const TwoBecPureState base = initial_xx_state(n);
  const std::size_t cols = tau_prime_grid.size();

  EntropyMap2d out;
  out.tau_grid.assign(tau_grid.begin(), tau_grid.end());
  out.tau_prime_grid.assign(tau_prime_grid.begin(), tau_prime_grid.end());
  out.records.resize(tau_grid.size() * cols);

  // One row per tau: rotate the zz-evolved state into the S^x eigenbasis
  // once, then each tau' costs an element-wise phase and one matrix product.
  parallel_for_blocks(tau_grid.size(), threads, [&](std::size_t begin, std::size_t end) {
    Eigen::MatrixXcd phased(N + 1, N + 1);
    for (std::size_t i = begin; i < end; ++i) {
      const double tau = tau_grid[i];
      const Eigen::MatrixXcd y = xs.eigenvectors.adjoint() * evolve_zz(base, tau).psi;
      for (std::size_t j = 0; j < cols; ++j) {
        const double tp = tau_prime_grid[j];
        for (int a = 0; a <= N; ++a) {
          const double lam = xs.eigenvalues[a];
          for (int l = 0; l <= N; ++l) {
            phased(a, l) = y(a, l) * std::polar(1.0, -lam * (2.0 * l - N) * tp);
          }
        }
        const TwoBecPureState point{N, xs.eigenvectors * phased};
        out.records[i * cols + j] = {tau, tp, entanglement_entropy(point), emax};
      }
    }
  });
  return out;
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 1) throw std::invalid_argument("linspace: steps must be >= 1");
  std::vector<double> grid(steps);
  if (steps == 1) {
    grid[0] = lo;
    return grid;
  }
  const double h = (hi - lo) / double(steps - 1);
  for (int i = 0; i < steps; ++i) grid[i] = lo + i * h;
  grid.back() = hi;
  return grid;
}

int default_scan_steps(BosonNumber n, double lo, double hi) {
  const double half_pi = std::numbers::pi / 2.0;
  const double span = std::abs(hi - lo);
  const double points = std::ceil(8.0 * n.value() * span / half_pi);
  return std::max(2, int(points));
}

}  // namespace becsim
