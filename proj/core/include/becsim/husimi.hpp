#pragma once

#include <vector>

#include <Eigen/Dense>

#include "becsim/spin_algebra.hpp"

namespace becsim {

/// Husimi Q function sampled on the Bloch sphere. Normalized so the sphere
/// integral is 1: Q(theta, phi) = (N+1)/(4 pi) <a(theta,phi)| rho |a(theta,phi)>.
/// thetas are midpoints of [0, pi] (poles excluded), phis are uniform on
/// [0, 2 pi).
struct QFunctionGrid {
  Eigen::VectorXd thetas;
  Eigen::VectorXd phis;
  Eigen::MatrixXd values;  // n_theta x n_phi, all >= 0

  /// Midpoint-rule quadrature of values over the sphere; approaches 1 as the
  /// grid refines (within 1% at 100 x 200 and above).
  double sphere_integral() const;
};

/// Q function of a pure single-condensate state given by Fock amplitudes.
QFunctionGrid qfunction_grid(const Eigen::VectorXcd& amps, BosonNumber n, int n_theta,
                             int n_phi);

/// Q function of a mixed single-condensate state (e.g. a reduced state).
QFunctionGrid qfunction_grid(const Eigen::MatrixXcd& rho1, BosonNumber n, int n_theta,
                             int n_phi);

/// One coherent-state component of the evolved superposition, drawn as a
/// circle on the flattened (equatorial) Bloch sphere. The azimuth of the
/// component entangled with |k>_2 is 2 (N - 2k) tau; every circle has radius
/// sqrt(2/N), the distance where coherent-state overlaps start to die off.
/// Opacity is |c_k| scaled so the largest coefficient is fully opaque.
struct CircleEntry {
  int k;
  double angle;
  double radius;
  double opacity;
};

struct CircleDiagram {
  std::vector<CircleEntry> entries;
};

CircleDiagram circle_diagram(BosonNumber n, double tau);

}  // namespace becsim
