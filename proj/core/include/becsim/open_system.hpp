#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "becsim/pure_dynamics.hpp"
#include "becsim/spin_algebra.hpp"

namespace becsim {

/// Mixed state of the two condensates. rho is (N+1)^2 x (N+1)^2, indexed by
/// the composite row-major pair (k, l) -> k (N+1) + l.
struct TwoBecDensityMatrix {
  int n;
  Eigen::MatrixXcd rho;

  double trace_error() const;        // |Tr rho - 1|
  double hermiticity_error() const;  // max |rho - rho^dag|
};

enum class DephasingAxis { Z, X };

DephasingAxis dephasing_axis_from_string(std::string_view s);
const char* to_string(DephasingAxis axis);

/// Markovian dephasing at rate gamma (units of J/hbar) along one axis,
/// acting on each condensate.
struct DephasingConfig {
  DephasingAxis axis;
  double gamma = 0.0;
};

/// Size caps for density-matrix evolution. Memory and integration cost grow
/// as (N+1)^4, steeply enough that exceeding these defaults requires an
/// explicit acknowledgment.
struct OpenSystemBudget {
  int max_n_z = 40;
  int max_n_x = 16;
  bool override_budget = false;

  void check(DephasingAxis axis, int n) const;  // throws ResourceError
};

/// Dephasing along z, starting from initial_xx_state(N). S^z commutes with
/// the S^z_1 S^z_2 coupling, so the master equation solves element-wise in
/// closed form:
///   rho_{(k,l),(k',l')}(tau) = c_k c_l c_k' c_l'
///       * exp(-i [s_k s_l - s_k' s_l'] tau)
///       * exp(-(gamma_z/2) [(s_k - s_k')^2 + (s_l - s_l')^2] tau),
/// with s_k = 2k - N. Exact; no integration error.
TwoBecDensityMatrix evolve_dephasing_z(BosonNumber n, double tau, double gamma_z,
                                       const OpenSystemBudget& budget = {});

/// Dephasing along x, starting from initial_xx_state(N). Integrates
///   drho/dtau = -i [S^z_1 S^z_2, rho]
///               - (gamma_x/2) sum_n [(S^x_n)^2 rho - 2 S^x_n rho S^x_n + rho (S^x_n)^2]
/// with fixed-step RK4, default step h = min(1e-3, 0.1/(N^2 max(1, gamma_x))).
/// Trace drift is monitored (never renormalized); drift above 1e-8 throws
/// NumericalError advising a smaller step. step_hint > 0 overrides h.
TwoBecDensityMatrix evolve_dephasing_x(BosonNumber n, double tau, double gamma_x,
                                       const OpenSystemBudget& budget = {},
                                       double step_hint = 0.0);

/// |psi><psi| as a TwoBecDensityMatrix.
TwoBecDensityMatrix pure_state_projector(const TwoBecPureState& s);

/// log2 of the trace norm of the partial transpose over condensate 2:
/// (k,l),(k',l') -> (k,l'),(k',l). The partial transpose of a Hermitian
/// matrix is Hermitian, so the trace norm is the sum of |eigenvalues|.
/// Zero (up to rounding) for states with a positive partial transpose.
double logarithmic_negativity(const TwoBecDensityMatrix& rho);

struct NegativityRecord {
  double tau = 0.0;
  double gamma = 0.0;
  DephasingAxis axis = DephasingAxis::Z;
  double neg_bits = 0.0;
  double ratio = 1.0;  // E_neg(gamma) / E_neg(0) at the same tau
};

/// Negativity with and without dephasing over a tau grid. The gamma = 0
/// reference is the pure-state projector (both evolutions reduce to the
/// closed system at gamma = 0). Points evaluate concurrently.
std::vector<NegativityRecord> negativity_scan(DephasingAxis axis, BosonNumber n,
                                              std::span<const double> tau_grid, double gamma,
                                              const OpenSystemBudget& budget = {},
                                              int threads = 1);

/// Gate-time rule for the robustness sweep, tau as a function of N.
enum class TauRule {
  InverseN,      // tau = pi/(4N)
  InverseSqrtN,  // tau = 1/sqrt(2N)
  Constant,      // tau independent of N (default pi/4)
};

TauRule tau_rule_from_string(std::string_view s);
const char* to_string(TauRule rule);

struct FitResult {
  double exponent_gamma = 0.0;  // ratio ~ N^{-gamma} from the log-log fit
  double r_squared = 1.0;       // quality of the log-log fit
  std::vector<int> n_values;
  std::vector<double> taus;
  std::vector<double> ratios;
  double r_squared_quadratic = 0.0;  // log(ratio) vs N^2 fit quality
  bool super_polynomial = false;     // quadratic model fits better
};

/// For each N: ratio E_neg(gamma)/E_neg(0) at tau given by the rule, then a
/// least-squares fit of log(ratio) against log(N). Also fits log(ratio)
/// against N^2 and reports which model describes the decay better.
/// Throws NumericalError if E_neg(0) vanishes at a requested point.
FitResult robustness_scaling(DephasingAxis axis, TauRule rule, double gamma,
                             std::span<const int> n_values, double const_tau = 0.0,
                             const OpenSystemBudget& budget = {}, int threads = 1);

}  // namespace becsim
