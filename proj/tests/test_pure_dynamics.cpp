#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "becsim/errors.hpp"
#include "becsim/pure_dynamics.hpp"
#include "oracles.hpp"

using namespace becsim;
using std::numbers::pi;

namespace {

TwoBecPureState random_state(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd psi(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) {
    for (int l = 0; l <= n; ++l) psi(k, l) = Complex(gauss(rng), gauss(rng));
  }
  psi /= psi.norm();
  return {n, psi};
}

}  // namespace

TEST_CASE("initial_xx_state") {
  SUBCASE("N=1 is |+>|+>") {
    const auto s = initial_xx_state(BosonNumber(1));
    for (int k = 0; k < 2; ++k) {
      for (int l = 0; l < 2; ++l) CHECK(std::abs(s.psi(k, l) - 0.5) < 1e-14);
    }
  }
  SUBCASE("N=2 is the outer product of (1/2, 1/sqrt2, 1/2)") {
    const auto s = initial_xx_state(BosonNumber(2));
    const double c[] = {0.5, 1.0 / std::sqrt(2.0), 0.5};
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) CHECK(std::abs(s.psi(k, l) - c[k] * c[l]) < 1e-14);
    }
  }
  SUBCASE("product state: zero entropy") {
    for (int n : {1, 5, 60}) {
      CHECK(entanglement_entropy(initial_xx_state(BosonNumber(n))) < 1e-10);
    }
  }
}

TEST_CASE("evolve_zz") {
  SUBCASE("tau = 0 is the identity") {
    const auto s = initial_xx_state(BosonNumber(6));
    CHECK((evolve_zz(s, 0.0).psi - s.psi).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("N=1 at pi/4 reaches one full bit") {
    const auto s = evolve_zz(initial_xx_state(BosonNumber(1)), pi / 4.0);
    CHECK(entanglement_entropy(s) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("tau = pi/2 returns to a product state") {
    for (int n : {3, 8}) {
      const auto s = evolve_zz(initial_xx_state(BosonNumber(n)), pi / 2.0);
      CHECK(entanglement_entropy(s) < 1e-8);
    }
  }
  SUBCASE("norm preserved on random states") {
    for (unsigned seed : {1u, 2u}) {
      const auto s = random_state(9, seed);
      CHECK(std::abs(evolve_zz(s, 0.37 + seed).norm() - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("evolve_xz") {
  SUBCASE("tau' = 0 is the identity") {
    const auto s = initial_xx_state(BosonNumber(7));
    CHECK((evolve_xz(s, 0.0).psi - s.psi).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("N=1 equals the Hadamard-conjugated zz gate") {
    // Hd S^x Hd = -S^z in this basis ordering, so
    // e^{-i S^x_1 S^z_2 t} = (Hd (x) I) e^{+i S^z_1 S^z_2 t} (Hd (x) I).
    Eigen::MatrixXcd hd(2, 2);
    hd << 1, 1, 1, -1;
    hd /= std::sqrt(2.0);
    const double t = 0.41;
    const auto s = random_state(1, 33);
    const auto got = evolve_xz(s, t);
    const TwoBecPureState rotated{1, hd * s.psi};
    const Eigen::MatrixXcd expected = hd * evolve_zz(rotated, -t).psi;
    CHECK((got.psi - expected).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("unitary: forward then backward is the identity") {
    for (int n : {4, 20}) {
      const auto s = random_state(n, 77);
      const auto back = evolve_xz(evolve_xz(s, 0.613), -0.613);
      CHECK((back.psi - s.psi).cwiseAbs().maxCoeff() < 1e-9);
      CHECK(std::abs(back.norm() - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("apply_gate dispatches on the axis pair") {
  const auto s = random_state(5, 11);
  const GateSpec zz{GateSpec::AxisPair::ZZ, 0.3};
  const GateSpec xz{GateSpec::AxisPair::XZ, 0.3};
  CHECK((apply_gate(s, zz).psi - evolve_zz(s, 0.3).psi).cwiseAbs().maxCoeff() == 0.0);
  CHECK((apply_gate(s, xz).psi - evolve_xz(s, 0.3).psi).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("brute-force gate oracle for N <= 3") {
  for (int n : {1, 2, 3}) {
    const Eigen::Index d = n + 1;
    const auto s0 = initial_xx_state(BosonNumber(n));
    for (double tau : {0.17, 0.5, 1.3}) {
      const Eigen::MatrixXcd u_zz =
          oracle::gate_unitary(oracle::kron(oracle::spin_z(n), oracle::spin_z(n)), tau);
      const Eigen::MatrixXcd expected_zz =
          oracle::unflatten(u_zz * oracle::flatten(s0.psi), d);
      CHECK((evolve_zz(s0, tau).psi - expected_zz).cwiseAbs().maxCoeff() < 1e-9);

      const Eigen::MatrixXcd u_xz =
          oracle::gate_unitary(oracle::kron(oracle::spin_x(n), oracle::spin_z(n)), tau);
      const Eigen::MatrixXcd expected_xz =
          oracle::unflatten(u_xz * oracle::flatten(s0.psi), d);
      CHECK((evolve_xz(s0, tau).psi - expected_xz).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("entanglement_entropy") {
  SUBCASE("one bit at pi/4 for any N") {
    for (int n : {1, 10, 50}) {
      const auto s = evolve_zz(initial_xx_state(BosonNumber(n)), pi / 4.0);
      CHECK(entanglement_entropy(s) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
  SUBCASE("N=1 closed form H2(cos^2 tau)") {
    for (double tau : {0.1, 0.4, pi / 4.0, 1.1, 1.5}) {
      const auto s = evolve_zz(initial_xx_state(BosonNumber(1)), tau);
      const double c2 = std::cos(tau) * std::cos(tau);
      const double s2 = 1.0 - c2;
      double expected = 0.0;
      if (c2 > 0.0) expected -= c2 * std::log2(c2);
      if (s2 > 0.0) expected -= s2 * std::log2(s2);
      CHECK(entanglement_entropy(s) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("matches the reduced-eigenvalue route on random states") {
    for (int n : {3, 12}) {
      const auto s = random_state(n, 1000 + n);
      CHECK(entanglement_entropy(s) ==
            doctest::Approx(oracle::entropy_via_reduced_eigenvalues(s.psi)).epsilon(1e-9));
    }
  }
  SUBCASE("plateau value at N=100 (frozen numerical value)") {
    // Exact computation gives E_S = 4.065238 at tau = 1/sqrt(2N); the ratio
    // to log2(N+1) is 0.610560, approaching 1/2 from above as N grows.
    const auto s = evolve_zz(initial_xx_state(BosonNumber(100)), 1.0 / std::sqrt(200.0));
    CHECK(entanglement_entropy(s) == doctest::Approx(4.065238).epsilon(1e-5));
  }
  SUBCASE("bounds on random states") {
    for (int n : {2, 9}) {
      const auto s = random_state(n, 42 + n);
      const double e = entanglement_entropy(s);
      CHECK(e >= 0.0);
      CHECK(e <= std::log2(n + 1.0) + 1e-9);
    }
  }
}

TEST_CASE("local unitaries leave the entropy unchanged") {
  const auto s = evolve_zz(initial_xx_state(BosonNumber(8)), 0.3);
  const double base = entanglement_entropy(s);
  const Eigen::MatrixXcd u1 = oracle::gate_unitary(oracle::spin_y(8), 0.7);
  const Eigen::MatrixXcd u2 = oracle::gate_unitary(oracle::spin_x(8), -1.2);
  const TwoBecPureState rotated{8, u1 * s.psi * u2.transpose()};
  CHECK(std::abs(entanglement_entropy(rotated) - base) < 1e-9);
}

TEST_CASE("periodicity in tau with period pi/2") {
  for (int n : {3, 4, 10, 11}) {
    const auto base = initial_xx_state(BosonNumber(n));
    for (double tau : {0.11, 0.62, 1.07}) {
      const double a = entanglement_entropy(evolve_zz(base, tau));
      const double b = entanglement_entropy(evolve_zz(base, tau + pi / 2.0));
      CHECK(std::abs(a - b) < 1e-8);
    }
  }
}

TEST_CASE("mirror symmetry about pi/4 holds for even and odd N") {
  // The pi/2 - tau phase factorizes into local phases for every N (for odd N
  // through (-i) sigma_k sigma_l with sigma = +-1), so the symmetry is not
  // restricted to even N.
  for (int n : {4, 7, 10, 11}) {
    const auto base = initial_xx_state(BosonNumber(n));
    for (double tau : {0.2, 0.55}) {
      const double a = entanglement_entropy(evolve_zz(base, tau));
      const double b = entanglement_entropy(evolve_zz(base, pi / 2.0 - tau));
      CHECK(std::abs(a - b) < 1e-8);
    }
  }
}

TEST_CASE("rational gate times") {
  SUBCASE("reduction and tau value") {
    const RationalGateTime t(2, 4);
    CHECK(t.m() == 1);
    CHECK(t.d() == 2);
    CHECK(t.tau() == doctest::Approx(pi / 8.0));
    CHECK_THROWS_AS(RationalGateTime(0, 1), std::invalid_argument);
  }
  SUBCASE("dip values") {
    CHECK(rational_dip_entropy({1, 1}) == doctest::Approx(1.0));
    CHECK(rational_dip_entropy({2, 1}) == doctest::Approx(0.0));
    CHECK(rational_dip_entropy({1, 2}) == doctest::Approx(2.0));
    CHECK(rational_dip_entropy({1, 3}) == doctest::Approx(std::log2(6.0)));
  }
  SUBCASE("matches a brute-force count of distinct fan positions") {
    const int n = 240;  // enough circles to populate every distinct position
    for (long long m = 1; m <= 5; ++m) {
      for (long long dd = 1; dd <= 6; ++dd) {
        const RationalGateTime t(m, dd);
        const double tau = t.tau();
        std::vector<double> angles;
        for (int k = 0; k <= n; ++k) {
          double a = std::fmod(2.0 * (n - 2.0 * k) * tau, 2.0 * pi);
          if (a < 0) a += 2.0 * pi;
          angles.push_back(a);
        }
        std::sort(angles.begin(), angles.end());
        int distinct = 0;
        for (std::size_t i = 0; i < angles.size(); ++i) {
          if (i == 0 || angles[i] - angles[i - 1] > 1e-6) ++distinct;
        }
        // Wrap-around duplicates (angle ~ 2 pi vs ~ 0).
        if (distinct > 1 && 2.0 * pi - angles.back() + angles.front() < 1e-6) --distinct;
        CHECK(rational_dip_entropy(t) == doctest::Approx(std::log2(double(distinct))).epsilon(1e-12));
      }
    }
  }
  SUBCASE("finite-N entropy lands on the dip value at N=200") {
    const auto base = initial_xx_state(BosonNumber(200));
    for (auto [m, dd] : {std::pair<long long, long long>{1, 1}, {1, 2}, {1, 3}}) {
      const RationalGateTime t(m, dd);
      const double e = entanglement_entropy(evolve_zz(base, t.tau()));
      CHECK(std::abs(e - rational_dip_entropy(t)) < 0.05);
    }
  }
}

TEST_CASE("scan around pi/4 at N=100: the dip bottoms out at exactly one bit") {
  const BosonNumber n(100);
  auto grid = linspace(0.70, 0.87, 35);
  grid.push_back(pi / 4.0);
  const auto records = scan_entropy(n, grid, 2);
  double lowest = 1e300, lowest_tau = -1.0;
  for (const auto& rec : records) {
    if (rec.entropy_bits < lowest) {
      lowest = rec.entropy_bits;
      lowest_tau = rec.tau;
    }
  }
  CHECK(lowest == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(lowest_tau == pi / 4.0);
}

TEST_CASE("plateau ceiling sits between log2 sqrt(N) and the maximum") {
  const BosonNumber n(100);
  const auto grid = linspace(0.2, 0.7, 40);
  const auto records = scan_entropy(n, grid, 2);
  double ceiling = 0.0;
  for (const auto& rec : records) ceiling = std::max(ceiling, rec.entropy_bits);
  CHECK(ceiling > std::log2(std::sqrt(100.0)));
  CHECK(ceiling < std::log2(101.0));
}

TEST_CASE("characteristic_times") {
  const auto t1 = characteristic_times(BosonNumber(1));
  CHECK(t1.t_fan == doctest::Approx(pi / 4.0));
  CHECK(t1.t_plateau == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(t1.t_cat == doctest::Approx(pi / 4.0));
  const auto t100 = characteristic_times(BosonNumber(100));
  CHECK(t100.t_fan == doctest::Approx(0.00785398163).epsilon(1e-9));
  CHECK(t100.t_plateau == doctest::Approx(0.07071067811).epsilon(1e-9));
  CHECK(t100.t_cat == doctest::Approx(0.78539816339).epsilon(1e-9));
  CHECK(characteristic_times(BosonNumber(2)).t_fan == doctest::Approx(pi / 8.0));
}

TEST_CASE("scan_entropy") {
  SUBCASE("N=1 reference points") {
    const std::vector<double> grid{0.0, pi / 4.0, pi / 2.0};
    const auto records = scan_entropy(BosonNumber(1), grid);
    REQUIRE(records.size() == 3);
    CHECK(records[0].entropy_bits < 1e-10);
    CHECK(records[1].entropy_bits == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(records[2].entropy_bits < 1e-10);
    CHECK(records[0].entropy_max_bits == doctest::Approx(1.0));
  }
  SUBCASE("single zero grid") {
    const std::vector<double> grid{0.0};
    CHECK(scan_entropy(BosonNumber(13), grid)[0].entropy_bits < 1e-10);
  }
  SUBCASE("thread count does not change results") {
    const auto grid = linspace(0.0, pi / 2.0, 40);
    const auto seq = scan_entropy(BosonNumber(12), grid, 1);
    const auto par = scan_entropy(BosonNumber(12), grid, 4);
    REQUIRE(seq.size() == par.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
      CHECK(seq[i].entropy_bits == par[i].entropy_bits);
    }
  }
  SUBCASE("non-finite tau rejected") {
    const std::vector<double> grid{std::nan("")};
    CHECK_THROWS_AS(scan_entropy(BosonNumber(3), grid), std::invalid_argument);
  }
}

TEST_CASE("map2d_entropy") {
  SUBCASE("tau' = 0 column reproduces the 1D scan") {
    const auto grid = linspace(0.0, pi / 2.0, 12);
    const auto pgrid = linspace(0.0, 0.9, 5);  // includes tau' = 0
    const auto map = map2d_entropy(BosonNumber(18), grid, pgrid, 2);
    const auto scan = scan_entropy(BosonNumber(18), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(std::abs(map.records[i * pgrid.size()].entropy_bits - scan[i].entropy_bits) < 1e-12);
    }
  }
  SUBCASE("budget enforcement") {
    const auto grid = linspace(0.0, 1.0, 3);
    CHECK_THROWS_AS(map2d_entropy(BosonNumber(201), grid, grid), ResourceError);
    const auto big = linspace(0.0, 1.0, 501);
    CHECK_THROWS_AS(map2d_entropy(BosonNumber(4), big, grid), ResourceError);
    CHECK_NOTHROW(map2d_entropy(BosonNumber(4), grid, grid));
  }
  SUBCASE("records carry both times") {
    const auto grid = linspace(0.1, 0.2, 2);
    const auto map = map2d_entropy(BosonNumber(3), grid, grid);
    CHECK(map.records[1].tau == doctest::Approx(0.1));
    REQUIRE(map.records[1].tau_prime.has_value());
    CHECK(*map.records[1].tau_prime == doctest::Approx(0.2));
  }
}

TEST_CASE("linspace and default steps") {
  CHECK(linspace(0.0, 1.0, 1) == std::vector<double>{0.0});
  const auto g = linspace(0.0, 2.0, 5);
  CHECK(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 2.0);
  CHECK_THROWS_AS(linspace(0.0, 1.0, 0), std::invalid_argument);
  CHECK(default_scan_steps(BosonNumber(100), 0.0, pi / 2.0) == 800);
  CHECK(default_scan_steps(BosonNumber(1), 0.0, 1e-6) == 2);
}
