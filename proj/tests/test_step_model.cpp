#include <cmath>

#include "doctest.h"
#include "forerunner/errors.hpp"
#include "forerunner/step.hpp"

using namespace forerunner;

namespace {
const MediumParams kStep = MediumParams::with_fraction(1.0, 0.5);
}

TEST_CASE("step eigenstate conserves flux and matches at the interface") {
  for (double frac : {0.1, 0.5, 0.9, 1.0, 1.5, 4.0}) {
    const MediumParams p = MediumParams::with_energy(1.0, 0.5);
    const double kp = frac * p.barrier_wavenumber();
    const StepEigenstate e = step_eigenstate(kp, p);
    // continuity of value and slope at x = 0
    CHECK(std::abs(1.0 + e.reflection - e.transmitted) < 1e-14);
    CHECK(std::abs(kp * (1.0 - e.reflection) - e.k_inside * e.transmitted) < 1e-13);
    const double transmitted_flux = e.above_threshold ? e.k_inside.real() * std::norm(e.transmitted) : 0.0;
    CHECK(kp * (1.0 - std::norm(e.reflection)) == doctest::Approx(transmitted_flux).scale(kp));
    CHECK(e.above_threshold == (frac >= 1.0));
  }
  CHECK_THROWS_AS(step_eigenstate(0.0, kStep), DomainError);
}

TEST_CASE("contour placement does not change the result") {
  QuadratureSpec wide;
  wide.cut_scale = 1.7;
  for (double x : {0.2, 1.0, 3.0})
    for (double t : {0.02, 0.4, 3.0, 30.0}) {
      const cplx a = psi_step(x, t, kStep);
      const cplx b = psi_step(x, t, kStep, wide);
      CHECK(std::abs(a - b) < 1e-8 * std::max(std::abs(a), 1e-3));
    }
}

TEST_CASE("step wave satisfies the Schrodinger equation inside the barrier") {
  const MediumParams p = kStep;
  const double c = p.hbar_sq_over_2m();
  const double hbar = kConstants.hbar;
  double worst = 0.0;
  for (double x : {0.3, 0.8, 1.5, 2.5})
    for (double t : {0.2, 1.0, 4.0, 12.0}) {
      const double hx = 5e-3;
      auto d2 = [&](double h) {
        return (psi_step(x + h, t, p) - 2.0 * psi_step(x, t, p) + psi_step(x - h, t, p)) / (h * h);
      };
      const cplx lap = (4.0 * d2(hx / 2) - d2(hx)) / 3.0;
      const cplx lhs = cplx(0.0, hbar) * dpsi_dt_step(x, t, p);
      const cplx rhs = -c * lap + p.V * psi_step(x, t, p);
      const double scale = std::abs(p.V * psi_step(x, t, p)) + std::abs(lhs) + 1e-3;
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
  CHECK(worst < 1e-6);
}

TEST_CASE("analytic time derivative agrees with finite differences") {
  for (double x : {0.4, 2.0})
    for (double t : {0.3, 2.0, 9.0}) {
      const double h = 1e-3 * t;
      auto fd = [&](double hh) { return (psi_step(x, t + hh, kStep) - psi_step(x, t - hh, kStep)) / (2.0 * hh); };
      const cplx rich = (4.0 * fd(h / 2) - fd(h)) / 3.0;
      const cplx d = dpsi_dt_step(x, t, kStep);
      CHECK(std::abs(d - rich) < 1e-6 * std::max(std::abs(d), 1e-2));
    }
}

TEST_CASE("step wave relaxes to the stationary transmitted state") {
  for (double x : {0.3, 1.0, 2.0}) {
    const double stat = std::norm(psi_step_stationary(x, 300.0, kStep));
    CHECK(std::norm(psi_step(x, 300.0, kStep)) == doctest::Approx(stat).epsilon(1e-2));
  }
}

TEST_CASE("step model signal and argument checks") {
  const StepModel m(kStep);
  CHECK(m.name() == "step");
  auto sig = m.at(1.0);
  CHECK(std::abs(sig->value(2.0) - psi_step(1.0, 2.0, kStep)) < 1e-15);
  REQUIRE(sig->derivative(2.0).has_value());
  CHECK_THROWS_AS(psi_step(0.0, 1.0, kStep), DomainError);
  CHECK_THROWS_AS(psi_step(1.0, 0.0, kStep), DomainError);
  CHECK_THROWS_AS(m.at(-1.0), DomainError);
  CHECK_THROWS_AS(StepModel(MediumParams::with_energy(1.0, 1.2)), RegimeError);
}
