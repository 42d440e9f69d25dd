#include "becsim/spin_algebra.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "becsim/errors.hpp"

namespace becsim {

namespace {
constexpr double kNormTol = 1e-12;
}

BosonNumber::BosonNumber(int n) : n_(n) {
  if (n < 1) {
    throw std::invalid_argument("BosonNumber: N must be >= 1, got " + std::to_string(n));
  }
}

SpinAxis spin_axis_from_string(std::string_view s) {
  if (s == "x" || s == "X") return SpinAxis::X;
  if (s == "y" || s == "Y") return SpinAxis::Y;
  if (s == "z" || s == "Z") return SpinAxis::Z;
  throw std::invalid_argument("invalid spin axis '" + std::string(s) + "' (expected x, y or z)");
}

const char* to_string(SpinAxis axis) {
  switch (axis) {
    case SpinAxis::X: return "x";
    case SpinAxis::Y: return "y";
    case SpinAxis::Z: return "z";
  }
  return "?";
}

double SpinCoherentParams::norm_error() const {
  return std::abs(std::norm(alpha) + std::norm(beta) - 1.0);
}

SpinCoherentParams equatorial_state(double phi) {
  const double r = 1.0 / std::sqrt(2.0);
  return {Complex(std::cos(phi), std::sin(phi)) * r, Complex(std::cos(phi), -std::sin(phi)) * r};
}

SpinCoherentParams plus_x_state() {
  const double r = 1.0 / std::sqrt(2.0);
  return {Complex(r, 0.0), Complex(r, 0.0)};
}

SpinCoherentParams bloch_state(double theta, double phi) {
  return {Complex(std::cos(theta / 2.0), 0.0),
          Complex(std::cos(phi), std::sin(phi)) * std::sin(theta / 2.0)};
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

Eigen::VectorXcd coherent_to_fock(const SpinCoherentParams& p, BosonNumber n) {
  if (p.norm_error() > kNormTol) {
    std::ostringstream os;
    os << "coherent_to_fock: (alpha, beta) not normalized, |alpha|^2+|beta|^2 - 1 = "
       << (std::norm(p.alpha) + std::norm(p.beta) - 1.0);
    throw std::invalid_argument(os.str());
  }
  const int N = n.value();
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(N + 1);

  const double ra = std::abs(p.alpha);
  const double rb = std::abs(p.beta);
  // Zero-magnitude amplitudes leave a single Fock component; handled outside
  // log space (k * log 0 is ill-defined at k = 0).
  if (ra == 0.0) {
    const double arg_b = std::arg(p.beta);
    amps[0] = std::polar(std::exp(N * std::log(rb)), N * arg_b);
    return amps;
  }
  if (rb == 0.0) {
    const double arg_a = std::arg(p.alpha);
    amps[N] = std::polar(std::exp(N * std::log(ra)), N * arg_a);
    return amps;
  }

  const double log_ra = std::log(ra);
  const double log_rb = std::log(rb);
  const double arg_a = std::arg(p.alpha);
  const double arg_b = std::arg(p.beta);
  for (int k = 0; k <= N; ++k) {
    const double mag = 0.5 * log_binomial(N, k) + k * log_ra + (N - k) * log_rb;
    const double phase = k * arg_a + (N - k) * arg_b;
    amps[k] = std::polar(std::exp(mag), phase);
  }
  return amps;
}

Complex coherent_overlap(const SpinCoherentParams& p1, const SpinCoherentParams& p2,
                         BosonNumber n) {
  if (p1.norm_error() > kNormTol || p2.norm_error() > kNormTol) {
    throw std::invalid_argument("coherent_overlap: inputs must be normalized within 1e-12");
  }
  const Complex z = std::conj(p1.alpha) * p2.alpha + std::conj(p1.beta) * p2.beta;
  const double r = std::abs(z);
  if (r == 0.0) return Complex(0.0, 0.0);
  // z^N in polar form; |z| <= 1 so the magnitude never overflows.
  const int N = n.value();
  return std::polar(std::exp(N * std::log(r)), N * std::arg(z));
}

CollectiveSpinMatrix spin_operator(SpinAxis axis, BosonNumber n) {
  const int N = n.value();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(N + 1, N + 1);
  switch (axis) {
    case SpinAxis::Z:
      for (int k = 0; k <= N; ++k) m(k, k) = Complex(2.0 * k - N, 0.0);
      break;
    case SpinAxis::X:
      for (int k = 0; k < N; ++k) {
        const double t = std::sqrt(double(k + 1) * double(N - k));
        m(k + 1, k) = Complex(t, 0.0);
        m(k, k + 1) = Complex(t, 0.0);
      }
      break;
    case SpinAxis::Y:
      for (int k = 0; k < N; ++k) {
        const double t = std::sqrt(double(k + 1) * double(N - k));
        m(k + 1, k) = Complex(0.0, -t);
        m(k, k + 1) = Complex(0.0, t);
      }
      break;
  }
  return {axis, std::move(m)};
}

const XEigensystem& x_eigendecomposition(BosonNumber n) {
  static std::mutex mtx;
  static std::map<int, std::unique_ptr<const XEigensystem>> cache;

  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n.value());
  if (it != cache.end()) return *it->second;

  const CollectiveSpinMatrix sx = spin_operator(SpinAxis::X, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sx.data);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("x_eigendecomposition: eigensolver failed for N = " +
                         std::to_string(n.value()));
  }
  auto sys = std::make_unique<XEigensystem>();
  sys->eigenvalues = solver.eigenvalues();
  sys->eigenvectors = solver.eigenvectors();
  auto [pos, inserted] = cache.emplace(n.value(), std::move(sys));
  return *pos->second;
}

}  // namespace becsim
