#include "becsim/husimi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace becsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void fill_axes(int n_theta, int n_phi, Eigen::VectorXd& thetas, Eigen::VectorXd& phis) {
  if (n_theta < 2 || n_phi < 2) {
    throw std::invalid_argument("qfunction_grid: grid sizes must be >= 2");
  }
  thetas.resize(n_theta);
  // Midpoints keep the poles (where sin(theta) vanishes) off the grid and
  // make the quadrature a plain midpoint rule.
  for (int i = 0; i < n_theta; ++i) thetas[i] = (i + 0.5) * std::numbers::pi / n_theta;
  phis.resize(n_phi);
  for (int j = 0; j < n_phi; ++j) phis[j] = j * kTwoPi / n_phi;
}

}  // namespace

double QFunctionGrid::sphere_integral() const {
  const double d_theta = std::numbers::pi / double(thetas.size());
  const double d_phi = kTwoPi / double(phis.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < thetas.size(); ++i) {
    total += values.row(i).sum() * std::sin(thetas[i]);
  }
  return total * d_theta * d_phi;
}

QFunctionGrid qfunction_grid(const Eigen::VectorXcd& amps, BosonNumber n, int n_theta,
                             int n_phi) {
  QFunctionGrid grid;
  fill_axes(n_theta, n_phi, grid.thetas, grid.phis);
  grid.values.resize(n_theta, n_phi);
  const double scale = (n.value() + 1) / (4.0 * std::numbers::pi);
  for (int i = 0; i < n_theta; ++i) {
    for (int j = 0; j < n_phi; ++j) {
      const Eigen::VectorXcd coh = coherent_to_fock(bloch_state(grid.thetas[i], grid.phis[j]), n);
      const Complex overlap = coh.dot(amps);  // <alpha|psi>
      grid.values(i, j) = scale * std::norm(overlap);
    }
  }
  return grid;
}

QFunctionGrid qfunction_grid(const Eigen::MatrixXcd& rho1, BosonNumber n, int n_theta,
                             int n_phi) {
  if (rho1.rows() != n.dim() || rho1.cols() != n.dim()) {
    throw std::invalid_argument("qfunction_grid: density matrix has wrong dimension");
  }
  QFunctionGrid grid;
  fill_axes(n_theta, n_phi, grid.thetas, grid.phis);
  grid.values.resize(n_theta, n_phi);
  const double scale = (n.value() + 1) / (4.0 * std::numbers::pi);
  for (int i = 0; i < n_theta; ++i) {
    for (int j = 0; j < n_phi; ++j) {
      const Eigen::VectorXcd coh = coherent_to_fock(bloch_state(grid.thetas[i], grid.phis[j]), n);
      const double q = (coh.adjoint() * rho1 * coh)(0, 0).real();
      grid.values(i, j) = scale * std::max(q, 0.0);
    }
  }
  return grid;
}

CircleDiagram circle_diagram(BosonNumber n, double tau) {
  const int N = n.value();
  const Eigen::VectorXd c = coherent_to_fock(plus_x_state(), n).real();
  const double c_max = c.maxCoeff();
  const double radius = std::sqrt(2.0 / double(N));

  CircleDiagram diagram;
  diagram.entries.reserve(N + 1);
  for (int k = 0; k <= N; ++k) {
    // Azimuth of the coherent state entangled with |k>_2; the equatorial
    // state (e^{i phi}, e^{-i phi})/sqrt(2) sits at Bloch azimuth 2 phi.
    diagram.entries.push_back({k, 2.0 * (N - 2.0 * k) * tau, radius, c[k] / c_max});
  }
  return diagram;
}

}  // namespace becsim
