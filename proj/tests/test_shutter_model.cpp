#include <cmath>
#include <memory>

#include "doctest.h"
#include "forerunner/errors.hpp"
#include "forerunner/shutter.hpp"

using namespace forerunner;

namespace {
const MediumParams kBarrier = MediumParams::with_energy(1.0, 0.1, 0.067, 40.0);
const cplx I{0.0, 1.0};

const ShutterSolution& solution() {
  static const ShutterSolution sol = ShutterSolution::converged(kBarrier);
  return sol;
}
}  // namespace

TEST_CASE("stationary solution matches the exterior waves") {
  for (double E0 : {0.1, 0.5, 0.99, 1.3}) {
    const MediumParams p = MediumParams::with_energy(1.0, E0, 0.067, 8.0);
    const double k = std::sqrt(E0 / p.hbar_sq_over_2m());
    const ScatteringAmplitudes a = stationary_amplitudes(k, p);
    CHECK(std::norm(a.reflection) + std::norm(a.transmission) == doctest::Approx(1.0).epsilon(1e-12));
    const double h = 1e-6;
    const cplx d0 = (phi_stationary(k, h, p) - phi_stationary(k, 0.0, p)) / h;
    CHECK(std::abs(d0 - I * k * (1.0 - a.reflection)) < 1e-4);
    const cplx dL = (phi_stationary(k, 8.0, p) - phi_stationary(k, 8.0 - h, p)) / h;
    CHECK(std::abs(dL - I * k * phi_stationary(k, 8.0, p)) < 1e-4);
  }
}

TEST_CASE("stationary solution decays evanescently") {
  const DerivedScales s = derive_scales(kBarrier);
  const double k = s.k;
  const double slope = (std::log(std::norm(phi_stationary(k, 15.0, kBarrier))) -
                        std::log(std::norm(phi_stationary(k, 5.0, kBarrier)))) /
                       10.0;
  CHECK(slope == doctest::Approx(-2.0 * s.kappa0).epsilon(1e-2));
  double prev = std::norm(phi_stationary(k, 0.0, kBarrier));
  for (double x = 0.05; x <= 3.0; x += 0.05) {
    const double d = std::norm(phi_stationary(k, x, kBarrier));
    CHECK(d < prev);
    prev = d;
  }
  CHECK_THROWS_AS(phi_stationary(k, 41.0, kBarrier), DomainError);
  CHECK_THROWS_AS(phi_stationary(k, -0.1, kBarrier), DomainError);
}

TEST_CASE("closed-form resonance sums") {
  const ShutterSolution big(kBarrier, 16384);
  const double k = big.k();
  for (double x : {0.3, 1.0, 5.0}) {
    const detail::ClosedSums c = detail::shutter_closed_sums(x, kBarrier);
    cplx s1 = 0.0, s3 = 0.0;
    double err1_at_1024 = 0.0;
    int n = 0;
    for (const ResonantState& st : big.poles()) {
      const cplx kn = st.pole().k;
      const cplx r = rho_factor(k, st, x);
      const cplx rm = -std::conj(r);
      const cplx km = -std::conj(kn);
      s1 += r / kn + rm / km;
      s3 += r / (kn * kn * kn) + rm / (km * km * km);
      if (++n == 1024) err1_at_1024 = std::abs(s1 - c.inverse_first);
    }
    // the cubic sum converges absolutely, the linear one only like 1/N
    CHECK(std::abs(s3 - c.inverse_third) < 1e-7 * std::abs(c.inverse_third));
    const double err1 = std::abs(s1 - c.inverse_first);
    CHECK(err1 < 1e-2 * std::abs(c.inverse_first));
    if (x >= 1.0) CHECK(err1 < err1_at_1024 / 8.0);
  }
}

TEST_CASE("internal solution starts empty and relaxes to the stationary state") {
  const ShutterSolution& sol = solution();
  for (double x : {0.1, 1.0, 3.0}) CHECK(psi_internal(x, 0.0, sol) == cplx(0.0));
  for (double x : {0.25, 0.5, 1.0, 2.0, 3.0}) {
    const double d = std::norm(psi_internal(x, 200.0, sol));
    const double stat = std::norm(phi_stationary(sol.k(), x, kBarrier));
    CHECK(d == doctest::Approx(stat).epsilon(1e-2));
  }
}

TEST_CASE("doubling the truncation leaves the density unchanged") {
  const ShutterSolution& sol = solution();
  const ShutterSolution twice(kBarrier, 2 * sol.N());
  for (double x : {0.2, 0.7, 2.0, 4.0})
    for (double t : {0.5, 1.0, 3.0, 10.0}) {
      const double a = std::norm(psi_internal(x, t, sol));
      const double b = std::norm(psi_internal(x, t, twice));
      CHECK(std::abs(a - b) < 1e-6 * b);
    }
}

TEST_CASE("analytic time derivative of the internal solution") {
  const ShutterSolution& sol = solution();
  for (double x : {0.3, 1.5})
    for (double t : {0.6, 2.0, 7.0}) {
      auto d = [&](double h) {
        return (psi_internal(x, t + h, sol) - psi_internal(x, t - h, sol)) / (2.0 * h);
      };
      const double h = 2e-5 * t;
      const cplx fd = (4.0 * d(h / 2.0) - d(h)) / 3.0;
      const cplx an = dpsi_dt_internal(x, t, sol);
      CHECK(std::abs(an - fd) < 1e-6 * std::abs(an));
    }
}

TEST_CASE("too few poles at short times is reported") {
  const ShutterSolution small(kBarrier, 64);
  CHECK_THROWS_AS(psi_internal(0.3, 0.05, small), ConvergenceError);
  CHECK(small.earliest_time() > solution().earliest_time());
}

TEST_CASE("snapshots") {
  const ShutterSolution& sol = solution();
  const std::vector<double> xs = {0.0, 0.5, 1.0, 2.0, 3.0};
  const auto snap = density_snapshots({0.0, 1.0, 2.0, 4.0}, xs, sol);
  REQUIRE(snap.size() == 4);
  for (double d : snap[0]) CHECK(d == 0.0);
  for (const auto& row : snap)
    for (double d : row) CHECK(d >= 0.0);
  // the density at 1 nm swings around the stationary value
  const double stat = std::norm(phi_stationary(sol.k(), 1.0, kBarrier));
  CHECK(snap[1][2] < stat);
  bool above = false, below = false;
  for (double t = 1.0; t < 40.0; t += 0.25) {
    const double d = std::norm(psi_internal(1.0, t, sol));
    above = above || d > stat;
    below = below || d < stat;
  }
  CHECK(above);
  CHECK(below);
}

TEST_CASE("initial sum rule converges only away from the edges") {
  const ShutterSolution& sol = solution();
  // interior: terms fall off like 1/n and the plain sum settles
  const double coarse = std::abs(initial_sum_rule_defect(20.0, sol, 128));
  const double fine = std::abs(initial_sum_rule_defect(20.0, sol, sol.N()));
  CHECK(fine < 0.05 * coarse);
  CHECK(fine < 1e-6);
  // near x = 0 the terms keep a fixed size, so partial sums oscillate
  const double r_low = std::abs(rho_factor(sol.k(), sol.poles()[99], 0.5));
  const double r_high = std::abs(rho_factor(sol.k(), sol.poles()[3999], 0.5));
  CHECK(r_high > 0.5 * r_low);
  CHECK_THROWS_AS(initial_sum_rule_defect(1.0, sol, 0), DomainError);
  CHECK_THROWS_AS(initial_sum_rule_defect(1.0, sol, sol.N() + 1), DomainError);
}
