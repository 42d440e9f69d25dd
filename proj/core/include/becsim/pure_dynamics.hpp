#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "becsim/spin_algebra.hpp"

namespace becsim {

/// Joint pure state of two condensates with N bosons each.
/// psi(k, l) is the amplitude of |k>_1 |l>_2, k, l = 0..N.
struct TwoBecPureState {
  int n;
  Eigen::MatrixXcd psi;

  /// sqrt(sum |psi|^2); 1 within 1e-10 for a valid state.
  double norm() const;
};

/// One entangling gate. Time tau is measured in units of hbar/J, where J is
/// the inter-condensate coupling energy.
struct GateSpec {
  enum class AxisPair { ZZ, XZ };
  AxisPair axis_pair;
  double tau;
};

/// A gate time tau = m pi / (4 d), stored gcd-reduced. These rational
/// multiples of pi/4 are exactly the times where the entanglement entropy
/// dips sharply.
class RationalGateTime {
 public:
  RationalGateTime(long long m, long long d);  // throws if m < 1 or d < 1
  long long m() const { return m_; }
  long long d() const { return d_; }
  double tau() const;

 private:
  long long m_;
  long long d_;
};

struct EntanglementRecord {
  double tau = 0.0;
  std::optional<double> tau_prime;
  double entropy_bits = 0.0;
  double entropy_max_bits = 0.0;  // log2(N+1)
};

struct CharacteristicTimes {
  double t_fan;      // pi/(4N): extremal coherent states reach +-y
  double t_plateau;  // 1/sqrt(2N): adjacent coherent states separate
  double t_cat;      // pi/4: two-branch superposition, 1 bit for every N
};

/// Both condensates in the maximal S^x eigenstate: psi(k, l) = c_k c_l with
/// c_k = sqrt(C(N,k)) / 2^{N/2}. Product state, zero entanglement.
TwoBecPureState initial_xx_state(BosonNumber n);

/// e^{-i S^z_1 S^z_2 tau}: multiplies psi(k, l) by exp(-i (2k-N)(2l-N) tau).
TwoBecPureState evolve_zz(const TwoBecPureState& s, double tau);

/// e^{-i S^x_1 S^z_2 tau'}: rotates condensate 1 into the S^x eigenbasis,
/// applies the diagonal phases, rotates back. Uses the cached S^x
/// eigendecomposition, so each call costs two dense matrix products.
TwoBecPureState evolve_xz(const TwoBecPureState& s, double tau_prime);

TwoBecPureState apply_gate(const TwoBecPureState& s, const GateSpec& gate);

/// Von Neumann entropy of either reduced state, in bits, from the singular
/// values of psi: E = -sum sigma_i^2 log2 sigma_i^2. Singular values below
/// 1e-12 are dropped; sigma^2 is clamped to [0, 1].
double entanglement_entropy(const TwoBecPureState& s);

/// rho_1 = psi psi^dag, the (N+1) x (N+1) reduced state of condensate 1.
Eigen::MatrixXcd reduced_density_bec1(const TwoBecPureState& s);

/// N -> infinity entropy at tau = m pi/(4 d): log2 of the number of distinct
/// coherent-state positions on the equator. Computed by integer arithmetic:
/// the count is the smallest positive q with q m = 0 (mod 2d), i.e.
/// 2d / gcd(m, 2d).
double rational_dip_entropy(const RationalGateTime& t);

CharacteristicTimes characteristic_times(BosonNumber n);

/// Entropy of evolve_zz(initial_xx_state(N), tau) for each grid point.
/// Grid points are evaluated concurrently on up to `threads` threads;
/// output is identical to a sequential evaluation.
std::vector<EntanglementRecord> scan_entropy(BosonNumber n, std::span<const double> tau_grid,
                                             int threads = 1);

struct EntropyMap2d {
  std::vector<double> tau_grid;
  std::vector<double> tau_prime_grid;
  /// Row-major: records[i * tau_prime_grid.size() + j] is (tau_i, tau'_j).
  std::vector<EntanglementRecord> records;
};

/// Entropy of e^{-i S^x_1 S^z_2 tau'_j} e^{-i S^z_1 S^z_2 tau_i} |xx> over the
/// grid. Default budget N <= 200 and at most 500 points per axis; pass
/// override_budget to exceed it. Throws ResourceError over budget.
EntropyMap2d map2d_entropy(BosonNumber n, std::span<const double> tau_grid,
                           std::span<const double> tau_prime_grid, int threads = 1,
                           bool override_budget = false);

/// Uniform grid, endpoints included; steps = 1 gives {lo}.
std::vector<double> linspace(double lo, double hi, int steps);

/// Default sweep resolution: at least ceil(8N) points per pi/2 of range
/// (entropy features occur at scale ~1/N), minimum 2.
int default_scan_steps(BosonNumber n, double lo, double hi);

}  // namespace becsim
