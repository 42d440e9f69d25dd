#include "becsim/open_system.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "becsim/errors.hpp"
#include "becsim/parallel.hpp"

namespace becsim {

namespace {

constexpr double kTraceDriftBound = 1e-8;
constexpr double kNegativityFloor = 1e-12;

/// Flattens psi(k, l) into the composite row-major index r = k (N+1) + l.
Eigen::VectorXcd flatten(const Eigen::MatrixXcd& psi) {
  const Eigen::Index d = psi.rows();
  Eigen::VectorXcd v(d * d);
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index l = 0; l < d; ++l) v[k * d + l] = psi(k, l);
  }
  return v;
}

// One-sided products with a single-condensate operator, using the Kronecker
// structure instead of forming (N+1)^2-dimensional matrices. rho columns are
// contiguous (column-major), and the composite row index is r = k d + l with
// l fastest, so each column maps onto a d x d matrix M(l, k).

/// out = (A (x) I) rho
void left_op1(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) {
  const Eigen::Index d = a.rows();
  const Eigen::Index D = rho.rows();
  for (Eigen::Index c = 0; c < D; ++c) {
    Eigen::Map<const Eigen::MatrixXcd> mc(rho.col(c).data(), d, d);
    Eigen::Map<Eigen::MatrixXcd> mo(out.col(c).data(), d, d);
    mo.noalias() = mc * a.transpose();
  }
}

/// out = (I (x) A) rho
void left_op2(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) {
  const Eigen::Index d = a.rows();
  const Eigen::Index D = rho.rows();
  for (Eigen::Index c = 0; c < D; ++c) {
    Eigen::Map<const Eigen::MatrixXcd> mc(rho.col(c).data(), d, d);
    Eigen::Map<Eigen::MatrixXcd> mo(out.col(c).data(), d, d);
    mo.noalias() = a * mc;
  }
}

/// out = rho (A (x) I)
void right_op1(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) {
  const Eigen::Index d = a.rows();
  const Eigen::Index D = rho.rows();
  using CMap = Eigen::Map<const Eigen::MatrixXcd, 0, Eigen::OuterStride<>>;
  using MMap = Eigen::Map<Eigen::MatrixXcd, 0, Eigen::OuterStride<>>;
  for (Eigen::Index lp = 0; lp < d; ++lp) {
    CMap b(rho.data() + lp * D, D, d, Eigen::OuterStride<>(d * D));
    MMap o(out.data() + lp * D, D, d, Eigen::OuterStride<>(d * D));
    o.noalias() = b * a;
  }
}

/// out = rho (I (x) A)
void right_op2(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) {
  const Eigen::Index d = a.rows();
  for (Eigen::Index kp = 0; kp * d < rho.cols(); ++kp) {
    out.middleCols(kp * d, d).noalias() = rho.middleCols(kp * d, d) * a;
  }
}

struct XDephasingWorkspace {
  Eigen::MatrixXcd sx;       // S^x on one condensate
  Eigen::MatrixXcd sx2;      // (S^x)^2
  Eigen::VectorXd weights;   // w_r = s_k s_l over the composite index
  Eigen::MatrixXcd acc, tmp1, tmp2;
  Eigen::MatrixXcd k1, k2, k3, k4, stage;

  XDephasingWorkspace(int n_bosons, Eigen::Index D) {
    const BosonNumber n(n_bosons);
    sx = spin_operator(SpinAxis::X, n).data;
    sx2 = sx * sx;
    const int N = n_bosons;
    const Eigen::Index d = N + 1;
    weights.resize(D);
    for (Eigen::Index k = 0; k < d; ++k) {
      for (Eigen::Index l = 0; l < d; ++l) {
        weights[k * d + l] = (2.0 * k - N) * (2.0 * l - N);
      }
    }
    acc.resize(D, D);
    tmp1.resize(D, D);
    tmp2.resize(D, D);
    k1.resize(D, D);
    k2.resize(D, D);
    k3.resize(D, D);
    k4.resize(D, D);
    stage.resize(D, D);
  }

  /// out = -i [S^z_1 S^z_2, rho] - (gamma/2) sum_n ((S^x_n)^2 rho
  ///       - 2 S^x_n rho S^x_n + rho (S^x_n)^2)
  void rhs(const Eigen::MatrixXcd& rho, double gamma, Eigen::MatrixXcd& out) {
    left_op1(sx2, rho, acc);
    right_op1(sx2, rho, tmp1);
    acc += tmp1;
    left_op1(sx, rho, tmp1);
    right_op1(sx, tmp1, tmp2);
    acc -= 2.0 * tmp2;
    left_op2(sx2, rho, tmp1);
    acc += tmp1;
    right_op2(sx2, rho, tmp1);
    acc += tmp1;
    left_op2(sx, rho, tmp1);
    right_op2(sx, tmp1, tmp2);
    acc -= 2.0 * tmp2;

    const Eigen::Index D = rho.rows();
    const double g2 = 0.5 * gamma;
    for (Eigen::Index c = 0; c < D; ++c) {
      const double wc = weights[c];
      for (Eigen::Index r = 0; r < D; ++r) {
        out(r, c) = Complex(0.0, -(weights[r] - wc)) * rho(r, c) - g2 * acc(r, c);
      }
    }
  }
};

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 1.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinearFit f;
  f.slope = (sxx > 0) ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = f.intercept + f.slope * x[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  if (ss_tot < 1e-300) {
    f.r_squared = (ss_res < 1e-300) ? 1.0 : 0.0;
  } else {
    f.r_squared = 1.0 - ss_res / ss_tot;
  }
  return f;
}

}  // namespace

double TwoBecDensityMatrix::trace_error() const { return std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag()); }

double TwoBecDensityMatrix::hermiticity_error() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

DephasingAxis dephasing_axis_from_string(std::string_view s) {
  if (s == "z" || s == "Z") return DephasingAxis::Z;
  if (s == "x" || s == "X") return DephasingAxis::X;
  throw std::invalid_argument("invalid dephasing axis '" + std::string(s) +
                              "' (expected z or x)");
}

const char* to_string(DephasingAxis axis) {
  return axis == DephasingAxis::Z ? "z" : "x";
}

void OpenSystemBudget::check(DephasingAxis axis, int n) const {
  if (override_budget) return;
  const int cap = (axis == DephasingAxis::Z) ? max_n_z : max_n_x;
  if (n > cap) {
    std::ostringstream os;
    os << "dephasing along " << to_string(axis) << ": N = " << n
       << " exceeds the default budget N <= " << cap
       << " ((N+1)^4 memory/integration cost; override to proceed)";
    throw ResourceError(os.str());
  }
}

TwoBecDensityMatrix evolve_dephasing_z(BosonNumber n, double tau, double gamma_z,
                                       const OpenSystemBudget& budget) {
  if (tau < 0.0 || gamma_z < 0.0) {
    throw std::invalid_argument("evolve_dephasing_z: tau and gamma must be >= 0");
  }
  budget.check(DephasingAxis::Z, n.value());

  const int N = n.value();
  const int d = N + 1;
  const Eigen::VectorXd c = coherent_to_fock(plus_x_state(), n).real();
  Eigen::VectorXd s(d);
  for (int k = 0; k < d; ++k) s[k] = 2.0 * k - N;

  TwoBecDensityMatrix out{N, Eigen::MatrixXcd(d * d, d * d)};
  const double g2 = 0.5 * gamma_z;
  for (int kp = 0; kp < d; ++kp) {
    for (int lp = 0; lp < d; ++lp) {
      const Eigen::Index col = kp * d + lp;
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
          const double mag = c[k] * c[l] * c[kp] * c[lp] *
                             std::exp(-g2 *
                                      ((s[k] - s[kp]) * (s[k] - s[kp]) +
                                       (s[l] - s[lp]) * (s[l] - s[lp])) *
                                      tau);
          const double phase = -(s[k] * s[l] - s[kp] * s[lp]) * tau;
          out.rho(k * d + l, col) = std::polar(mag, phase);
        }
      }
    }
  }
  return out;
}

TwoBecDensityMatrix evolve_dephasing_x(BosonNumber n, double tau, double gamma_x,
                                       const OpenSystemBudget& budget, double step_hint) {
  if (tau < 0.0 || gamma_x < 0.0) {
    throw std::invalid_argument("evolve_dephasing_x: tau and gamma must be >= 0");
  }
  budget.check(DephasingAxis::X, n.value());

  const int N = n.value();
  const Eigen::Index D = Eigen::Index(N + 1) * (N + 1);
  TwoBecDensityMatrix out{N, Eigen::MatrixXcd()};
  {
    const Eigen::VectorXcd v = flatten(initial_xx_state(n).psi);
    out.rho = v * v.adjoint();
  }
  if (tau == 0.0) return out;

  const double h_default = std::min(1e-3, 0.1 / (double(N) * N * std::max(1.0, gamma_x)));
  const double h_target = (step_hint > 0.0) ? step_hint : h_default;
  const long steps = std::max<long>(1, long(std::ceil(tau / h_target)));
  const double h = tau / double(steps);

  XDephasingWorkspace ws(N, D);
  for (long i = 0; i < steps; ++i) {
    ws.rhs(out.rho, gamma_x, ws.k1);
    ws.stage = out.rho + (h / 2.0) * ws.k1;
    ws.rhs(ws.stage, gamma_x, ws.k2);
    ws.stage = out.rho + (h / 2.0) * ws.k2;
    ws.rhs(ws.stage, gamma_x, ws.k3);
    ws.stage = out.rho + h * ws.k3;
    ws.rhs(ws.stage, gamma_x, ws.k4);
    out.rho += (h / 6.0) * (ws.k1 + 2.0 * ws.k2 + 2.0 * ws.k3 + ws.k4);

    const double drift = out.rho.trace().real() - 1.0;
    // Every density-matrix element is bounded by 1; growth past that is an
    // unstable step (the commutator/dissipator structure conserves the trace
    // even then, so the drift bound alone cannot catch a blowup).
    const double peak = out.rho.cwiseAbs().maxCoeff();
    if (std::abs(drift) > kTraceDriftBound || peak > 2.0) {
      std::ostringstream os;
      os << "evolve_dephasing_x: trace drift " << drift << ", max element " << peak
         << " after step " << (i + 1) << " of " << steps
         << "; retry with a smaller step";
      throw NumericalError(os.str());
    }
  }
  return out;
}

TwoBecDensityMatrix pure_state_projector(const TwoBecPureState& s) {
  const Eigen::VectorXcd v = flatten(s.psi);
  return {s.n, v * v.adjoint()};
}

double logarithmic_negativity(const TwoBecDensityMatrix& state) {
  if (state.trace_error() > 1e-6) {
    throw std::invalid_argument("logarithmic_negativity: trace differs from 1 by " +
                                std::to_string(state.trace_error()));
  }
  if (state.hermiticity_error() > 1e-6) {
    throw std::invalid_argument("logarithmic_negativity: input not Hermitian");
  }
  const int d = state.n + 1;
  Eigen::MatrixXcd pt(state.rho.rows(), state.rho.cols());
  // Partial transpose over condensate 2: (k,l),(k',l') -> (k,l'),(k',l).
  for (int k = 0; k < d; ++k) {
    for (int kp = 0; kp < d; ++kp) {
      for (int l = 0; l < d; ++l) {
        for (int lp = 0; lp < d; ++lp) {
          pt(k * d + l, kp * d + lp) = state.rho(k * d + lp, kp * d + l);
        }
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(pt, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("logarithmic_negativity: eigensolver failed (dim = " +
                         std::to_string(pt.rows()) + ")");
  }
  return std::log2(solver.eigenvalues().cwiseAbs().sum());
}

std::vector<NegativityRecord> negativity_scan(DephasingAxis axis, BosonNumber n,
                                              std::span<const double> tau_grid, double gamma,
                                              const OpenSystemBudget& budget, int threads) {
  budget.check(axis, n.value());
  std::vector<NegativityRecord> records(tau_grid.size());
  const TwoBecPureState base = initial_xx_state(n);
  parallel_for_blocks(tau_grid.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double tau = tau_grid[i];
      if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("negativity_scan: tau must be finite and >= 0");
      }
      const double neg0 =
          logarithmic_negativity(pure_state_projector(evolve_zz(base, tau)));
      const TwoBecDensityMatrix evolved =
          (axis == DephasingAxis::Z) ? evolve_dephasing_z(n, tau, gamma, budget)
                                     : evolve_dephasing_x(n, tau, gamma, budget);
      const double neg = logarithmic_negativity(evolved);
      // Ratio pinned to 1 where the reference negativity vanishes (tau = 0).
      const double ratio = (neg0 > kNegativityFloor) ? neg / neg0 : 1.0;
      records[i] = {tau, gamma, axis, neg, ratio};
    }
  });
  return records;
}

TauRule tau_rule_from_string(std::string_view s) {
  if (s == "1/N" || s == "1/n") return TauRule::InverseN;
  if (s == "1/sqrtN" || s == "1/sqrtn") return TauRule::InverseSqrtN;
  if (s == "const") return TauRule::Constant;
  throw std::invalid_argument("invalid tau rule '" + std::string(s) +
                              "' (expected 1/N, 1/sqrtN or const)");
}

const char* to_string(TauRule rule) {
  switch (rule) {
    case TauRule::InverseN: return "1/N";
    case TauRule::InverseSqrtN: return "1/sqrtN";
    case TauRule::Constant: return "const";
  }
  return "?";
}

FitResult robustness_scaling(DephasingAxis axis, TauRule rule, double gamma,
                             std::span<const int> n_values, double const_tau,
                             const OpenSystemBudget& budget, int threads) {
  if (n_values.empty()) {
    throw std::invalid_argument("robustness_scaling: need at least one N");
  }
  if (gamma < 0.0) throw std::invalid_argument("robustness_scaling: gamma must be >= 0");
  for (int n : n_values) budget.check(axis, n);
  const double fixed_tau = (const_tau > 0.0) ? const_tau : std::numbers::pi / 4.0;

  FitResult res;
  res.n_values.assign(n_values.begin(), n_values.end());
  res.taus.resize(n_values.size());
  res.ratios.resize(n_values.size());

  parallel_for_blocks(n_values.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const BosonNumber n(n_values[i]);
      const CharacteristicTimes times = characteristic_times(n);
      double tau = fixed_tau;
      if (rule == TauRule::InverseN) tau = times.t_fan;
      if (rule == TauRule::InverseSqrtN) tau = times.t_plateau;
      budget.check(axis, n.value());

      const double neg0 =
          logarithmic_negativity(pure_state_projector(evolve_zz(initial_xx_state(n), tau)));
      if (neg0 <= kNegativityFloor) {
        std::ostringstream os;
        os << "robustness_scaling: reference negativity vanishes at N = " << n.value()
           << ", tau = " << tau << " (ratio undefined)";
        throw NumericalError(os.str());
      }
      const TwoBecDensityMatrix evolved =
          (axis == DephasingAxis::Z) ? evolve_dephasing_z(n, tau, gamma, budget)
                                     : evolve_dephasing_x(n, tau, gamma, budget);
      res.taus[i] = tau;
      res.ratios[i] = logarithmic_negativity(evolved) / neg0;
    }
  });

  std::vector<double> log_n(res.n_values.size()), log_ratio(res.n_values.size()),
      n_sq(res.n_values.size());
  for (std::size_t i = 0; i < res.n_values.size(); ++i) {
    if (!(res.ratios[i] > 0.0)) {
      std::ostringstream os;
      os << "robustness_scaling: nonpositive ratio " << res.ratios[i] << " at N = "
         << res.n_values[i] << " cannot enter the log fit";
      throw NumericalError(os.str());
    }
    log_n[i] = std::log(double(res.n_values[i]));
    log_ratio[i] = std::log(res.ratios[i]);
    n_sq[i] = double(res.n_values[i]) * double(res.n_values[i]);
  }
  const LinearFit loglog = fit_line(log_n, log_ratio);
  const LinearFit quad = fit_line(n_sq, log_ratio);
  res.exponent_gamma = -loglog.slope;
  res.r_squared = loglog.r_squared;
  res.r_squared_quadratic = quad.r_squared;
  res.super_polynomial = quad.r_squared > loglog.r_squared;
  return res;
}

}  // namespace becsim
