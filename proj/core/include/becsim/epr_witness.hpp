#pragma once

#include <span>
#include <vector>

#include "becsim/pure_dynamics.hpp"
#include "becsim/spin_algebra.hpp"

namespace becsim {

/// First moments of S^x on each condensate and the two EPR-type variances.
struct MomentReport {
  double sx1 = 0.0;
  double sx2 = 0.0;
  double var_a = 0.0;  // <[Delta(S^y_1 - S^z_2)]^2>
  double var_b = 0.0;  // <[Delta(S^y_2 - S^z_1)]^2>
};

/// Separability inequality
///   var_a + var_b >= 2 <S^x_1> + 2 <S^x_2>.
/// margin < 0 certifies entanglement; margin >= 0 is inconclusive
/// (the witness is sufficient, not necessary).
struct WitnessResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool entangled_flag = false;
};

/// Short-time continuous-variable prediction for each variance term:
/// N (1 - 2 N tau)^2 + N. Valid for tau of order 1/N or less; minimum N at
/// tau = 1/(2N).
struct CvPrediction {
  double tau = 0.0;
  double predicted_var = 0.0;
};

struct WitnessScanRecord {
  double tau = 0.0;
  WitnessResult witness;
  CvPrediction cv;
};

/// Moments computed by tridiagonal operator action on the columns/rows of
/// psi (no (N+1)^2-dimensional operators are formed), so the witness stays
/// usable at N of several hundred.
MomentReport collective_moments(const TwoBecPureState& s);

WitnessResult witness_from_moments(const MomentReport& m);
WitnessResult evaluate_witness(const TwoBecPureState& s);

CvPrediction cv_prediction(BosonNumber n, double tau);

/// Witness and CV prediction after evolve_zz from the standard initial
/// state, per grid point. Deterministic; points evaluate concurrently.
std::vector<WitnessScanRecord> witness_scan(BosonNumber n, std::span<const double> tau_grid,
                                            int threads = 1);

}  // namespace becsim
