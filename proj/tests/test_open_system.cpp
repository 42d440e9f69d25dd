#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "becsim/errors.hpp"
#include "becsim/open_system.hpp"
#include "oracles.hpp"

using namespace becsim;
using std::numbers::pi;

namespace {

double min_eigenvalue(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("z dephasing closed form") {
  SUBCASE("gamma = 0 reproduces the pure projector") {
    const double tau = 0.42;
    const auto rho = evolve_dephasing_z(BosonNumber(5), tau, 0.0);
    const auto proj = pure_state_projector(evolve_zz(initial_xx_state(BosonNumber(5)), tau));
    CHECK((rho.rho - proj.rho).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("tau = 0 is the product projector for any gamma") {
    const auto rho = evolve_dephasing_z(BosonNumber(4), 0.0, 2.5);
    const auto proj = pure_state_projector(initial_xx_state(BosonNumber(4)));
    CHECK((rho.rho - proj.rho).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("matches the dense RK4 oracle for N <= 4") {
    for (int n : {2, 4}) {
      const double tau = 0.3, gamma = 0.5;
      const auto got = evolve_dephasing_z(BosonNumber(n), tau, gamma);
      const Eigen::MatrixXcd rho0 = pure_state_projector(initial_xx_state(BosonNumber(n))).rho;
      const Eigen::MatrixXcd expected =
          oracle::rk4_master_equation(n, tau, gamma, 'z', rho0, 1e-4);
      CHECK((got.rho - expected).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
  SUBCASE("trace, Hermiticity, positivity") {
    const auto rho = evolve_dephasing_z(BosonNumber(6), 0.7, 0.3);
    CHECK(rho.trace_error() < 1e-9);
    CHECK(rho.hermiticity_error() < 1e-9);
    CHECK(min_eigenvalue(rho.rho) > -1e-7);
  }
  SUBCASE("budget guard") {
    CHECK_THROWS_AS(evolve_dephasing_z(BosonNumber(41), 0.1, 0.1), ResourceError);
  }
  SUBCASE("negative parameters rejected") {
    CHECK_THROWS_AS(evolve_dephasing_z(BosonNumber(3), -0.1, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(evolve_dephasing_z(BosonNumber(3), 0.1, -0.1), std::invalid_argument);
  }
}

TEST_CASE("x dephasing RK4") {
  SUBCASE("gamma = 0 reproduces the pure projector") {
    const int n = 4;
    const double tau = 0.3;
    const auto rho = evolve_dephasing_x(BosonNumber(n), tau, 0.0);
    const auto proj = pure_state_projector(evolve_zz(initial_xx_state(BosonNumber(n)), tau));
    CHECK((rho.rho - proj.rho).cwiseAbs().maxCoeff() < 1e-7);
  }
  SUBCASE("N=1 matches the superoperator exponential") {
    const int n = 1;
    const double tau = 0.3, gamma = 0.2;
    const auto got = evolve_dephasing_x(BosonNumber(n), tau, gamma);
    const Eigen::MatrixXcd rho0 = pure_state_projector(initial_xx_state(BosonNumber(n))).rho;
    const Eigen::MatrixXcd expected = oracle::superoperator_evolve(n, tau, gamma, 'x', rho0);
    CHECK((got.rho - expected).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("N=3 matches the dense RK4 oracle") {
    const int n = 3;
    const double tau = 0.4, gamma = 0.3;
    const auto got = evolve_dephasing_x(BosonNumber(n), tau, gamma);
    const Eigen::MatrixXcd rho0 = pure_state_projector(initial_xx_state(BosonNumber(n))).rho;
    const Eigen::MatrixXcd expected =
        oracle::rk4_master_equation(n, tau, gamma, 'x', rho0, 1e-4);
    CHECK((got.rho - expected).cwiseAbs().maxCoeff() < 1e-7);
  }
  SUBCASE("trace, Hermiticity, positivity after a run") {
    const auto rho = evolve_dephasing_x(BosonNumber(5), 0.5, 0.2);
    CHECK(rho.trace_error() < 1e-8);
    CHECK(rho.hermiticity_error() < 1e-9);
    CHECK(min_eigenvalue(rho.rho) > -1e-7);
  }
  SUBCASE("absurd step triggers the drift guard") {
    CHECK_THROWS_AS(evolve_dephasing_x(BosonNumber(4), 1.0, 1.0, {}, 0.5), NumericalError);
  }
  SUBCASE("budget guard") {
    CHECK_THROWS_AS(evolve_dephasing_x(BosonNumber(17), 0.01, 0.1), ResourceError);
    OpenSystemBudget open;
    open.override_budget = true;
    CHECK_NOTHROW(evolve_dephasing_x(BosonNumber(17), 0.001, 0.1, open));
  }
}

TEST_CASE("logarithmic negativity") {
  SUBCASE("zero for a product state") {
    const auto proj = pure_state_projector(initial_xx_state(BosonNumber(5)));
    CHECK(std::abs(logarithmic_negativity(proj)) < 1e-9);
  }
  SUBCASE("one bit for the N=1 Bell state") {
    const auto proj =
        pure_state_projector(evolve_zz(initial_xx_state(BosonNumber(1)), pi / 4.0));
    CHECK(logarithmic_negativity(proj) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("pure-state identity: 2 log2 of the Schmidt-coefficient sum") {
    for (int n : {2, 4, 6}) {
      for (double tau : {0.1, 0.35, pi / 4.0}) {
        const auto s = evolve_zz(initial_xx_state(BosonNumber(n)), tau);
        const double via_pt = logarithmic_negativity(pure_state_projector(s));
        CHECK(via_pt == doctest::Approx(oracle::schmidt_negativity(s.psi)).epsilon(1e-8));
      }
    }
  }
  SUBCASE("invariant under local unitaries") {
    const int n = 3;
    const auto rho = evolve_dephasing_z(BosonNumber(n), 0.3, 0.2);
    const double base = logarithmic_negativity(rho);
    const Eigen::MatrixXcd u1 = oracle::gate_unitary(oracle::spin_y(n), 0.9);
    const Eigen::MatrixXcd u2 = oracle::gate_unitary(oracle::spin_x(n), -0.4);
    const Eigen::MatrixXcd u = oracle::kron(u1, u2);
    const TwoBecDensityMatrix rotated{n, u * rho.rho * u.adjoint()};
    CHECK(std::abs(logarithmic_negativity(rotated) - base) < 1e-8);
  }
  SUBCASE("garbage input rejected") {
    TwoBecDensityMatrix bad{1, Eigen::MatrixXcd::Identity(4, 4)};  // trace 4
    CHECK_THROWS_AS(logarithmic_negativity(bad), std::invalid_argument);
  }
}

TEST_CASE("negativity_scan") {
  SUBCASE("gamma = 0 gives ratio 1 and the pure value") {
    const auto grid = linspace(0.05, 0.5, 4);
    const auto records = negativity_scan(DephasingAxis::Z, BosonNumber(4), grid, 0.0);
    for (const auto& rec : records) {
      CHECK(rec.ratio == doctest::Approx(1.0).epsilon(1e-9));
      const auto s = evolve_zz(initial_xx_state(BosonNumber(4)), rec.tau);
      CHECK(rec.neg_bits == doctest::Approx(oracle::schmidt_negativity(s.psi)).epsilon(1e-8));
    }
  }
  SUBCASE("dephasing never raises the ratio above 1") {
    const auto grid = linspace(0.02, 0.7, 6);
    for (double gamma : {0.05, 0.4}) {
      const auto records = negativity_scan(DephasingAxis::Z, BosonNumber(5), grid, gamma);
      for (const auto& rec : records) {
        CHECK(rec.neg_bits >= -1e-9);
        CHECK(rec.ratio <= 1.0 + 1e-6);
      }
    }
  }
  SUBCASE("tau = 0 reports ratio 1 by convention") {
    const std::vector<double> grid{0.0};
    const auto records = negativity_scan(DephasingAxis::Z, BosonNumber(3), grid, 0.3);
    CHECK(records[0].neg_bits < 1e-9);
    CHECK(records[0].ratio == 1.0);
  }
  SUBCASE("x dephasing bites much harder at pi/4 than at pi/(4N)") {
    const int n = 8;
    const std::vector<double> grid{pi / (4.0 * n), pi / 4.0};
    const auto records = negativity_scan(DephasingAxis::X, BosonNumber(n), grid, 0.05);
    CHECK(records[1].ratio < 0.5 * records[0].ratio);
  }
}

TEST_CASE("robustness_scaling") {
  SUBCASE("gamma = 0: all ratios 1, exponent 0") {
    const std::vector<int> ns{4, 6, 8};
    const auto fit = robustness_scaling(DephasingAxis::Z, TauRule::InverseSqrtN, 0.0, ns);
    for (double r : fit.ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(std::abs(fit.exponent_gamma) < 1e-6);
  }
  SUBCASE("z axis at the plateau time: power-law exponent in [0, 1]") {
    const std::vector<int> ns{4, 6, 8, 10, 12};
    const auto fit = robustness_scaling(DephasingAxis::Z, TauRule::InverseSqrtN, 0.1, ns);
    CHECK(fit.exponent_gamma >= 0.0);
    CHECK(fit.exponent_gamma <= 1.0);
    CHECK(fit.taus[0] == doctest::Approx(1.0 / std::sqrt(8.0)));
  }
  SUBCASE("rule selects the documented times") {
    const std::vector<int> ns{4};
    const auto fan = robustness_scaling(DephasingAxis::Z, TauRule::InverseN, 0.01, ns);
    CHECK(fan.taus[0] == doctest::Approx(pi / 16.0));
    const auto fixed = robustness_scaling(DephasingAxis::Z, TauRule::Constant, 0.01, ns, 0.33);
    CHECK(fixed.taus[0] == doctest::Approx(0.33));
  }
  SUBCASE("degenerate reference negativity is an error naming the point") {
    const std::vector<int> ns{4};
    // tau = pi/2 returns to a product state: E_neg(0) = 0.
    CHECK_THROWS_WITH_AS(
        robustness_scaling(DephasingAxis::Z, TauRule::Constant, 0.1, ns, pi / 2.0),
        doctest::Contains("N = 4"), NumericalError);
  }
  SUBCASE("string parsing") {
    CHECK(tau_rule_from_string("1/N") == TauRule::InverseN);
    CHECK(tau_rule_from_string("1/sqrtN") == TauRule::InverseSqrtN);
    CHECK(tau_rule_from_string("const") == TauRule::Constant);
    CHECK_THROWS_AS(tau_rule_from_string("cubic"), std::invalid_argument);
    CHECK(dephasing_axis_from_string("z") == DephasingAxis::Z);
    CHECK_THROWS_AS(dephasing_axis_from_string("y"), std::invalid_argument);
  }
}
