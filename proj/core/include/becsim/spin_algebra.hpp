#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace becsim {

using Complex = std::complex<double>;

/// Number of bosons N in one condensate. The Fock space of one condensate
/// has dimension N+1. Dense routines stay practical for N up to ~2000;
/// coefficient formulas are evaluated in log space and remain finite for
/// N of at least 1000.
class BosonNumber {
 public:
  explicit BosonNumber(int n);
  int value() const { return n_; }
  int dim() const { return n_ + 1; }

 private:
  int n_;
};

enum class SpinAxis { X, Y, Z };

/// Parses "x", "y" or "z"; throws std::invalid_argument otherwise.
SpinAxis spin_axis_from_string(std::string_view s);
const char* to_string(SpinAxis axis);

/// Bloch-sphere amplitudes (alpha, beta) of one condensate,
/// |alpha|^2 + |beta|^2 = 1 within 1e-12.
struct SpinCoherentParams {
  Complex alpha;
  Complex beta;

  /// | |alpha|^2 + |beta|^2 - 1 |
  double norm_error() const;
};

/// Equatorial state (e^{i phi}, e^{-i phi})/sqrt(2).
SpinCoherentParams equatorial_state(double phi);

/// (1, 1)/sqrt(2): every boson in the +x eigenstate.
SpinCoherentParams plus_x_state();

/// Coherent state at polar angle theta, azimuth phi:
/// alpha = cos(theta/2), beta = e^{i phi} sin(theta/2).
SpinCoherentParams bloch_state(double theta, double phi);

/// Collective spin operator on the (N+1)-dimensional Fock space.
/// S^z = diag(2k - N); S^x and S^y are tridiagonal with zero diagonal.
struct CollectiveSpinMatrix {
  SpinAxis axis;
  Eigen::MatrixXcd data;
};

/// Expands the coherent state in the S^z Fock basis:
/// amps[k] = sqrt(C(N,k)) alpha^k beta^(N-k), k = 0..N.
/// Binomials are taken in log space, so the expansion is stable for
/// N up to at least 1000. Throws std::invalid_argument when p is not
/// normalized within 1e-12.
Eigen::VectorXcd coherent_to_fock(const SpinCoherentParams& p, BosonNumber n);

/// Overlap of two coherent states: (conj(a1) a2 + conj(b1) b2)^N.
Complex coherent_overlap(const SpinCoherentParams& p1, const SpinCoherentParams& p2,
                         BosonNumber n);

CollectiveSpinMatrix spin_operator(SpinAxis axis, BosonNumber n);

struct XEigensystem {
  Eigen::VectorXd eigenvalues;    // ascending; equals {-N, -N+2, ..., N}
  Eigen::MatrixXcd eigenvectors;  // orthonormal columns, W Lambda W^dag = S^x
};

/// Eigendecomposition of S^x, computed once per N and cached for the
/// lifetime of the program. Safe to read from multiple threads.
/// Throws NumericalError if the eigensolver fails.
const XEigensystem& x_eigendecomposition(BosonNumber n);

/// log C(n, k) via lgamma.
double log_binomial(int n, int k);

}  // namespace becsim
