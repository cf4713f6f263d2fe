#include <cmath>
#include <numbers>

#include "doctest.h"
#include "forerunner/errors.hpp"
#include "forerunner/oracle.hpp"
#include "forerunner/step.hpp"

using namespace forerunner;

namespace {

const cplx I{0.0, 1.0};
const double kD = kConstants.hbar_sq_over_me / (2.0 * 0.067) / kConstants.hbar;
const double kSigma = 1.5;
const double kK0 = 1.0;

cplx gaussian(double x, double t) {
  const cplx s = 1.0 + I * kD * t / (kSigma * kSigma);
  return std::exp((-x * x / (4.0 * kSigma * kSigma) + I * kK0 * x - I * kD * kK0 * kK0 * t) / s) / std::sqrt(s);
}

OracleGrid free_grid(double half_width, double dx, double dt) {
  const auto nx = static_cast<std::size_t>(std::llround(2.0 * half_width / dx)) + 1;
  return make_grid(-half_width, half_width, nx, dt, 0.067, [](double) { return 0.0; }, 6.0);
}

std::vector<cplx> sample(const OracleGrid& g) {
  std::vector<cplx> psi(g.nx);
  for (std::size_t i = 0; i < g.nx; ++i) psi[i] = gaussian(g.x(i), 0.0);
  return psi;
}

const std::vector<ProbePoint> kProbes{{-1.0, 0.5}, {0.0, 1.0}, {1.5, 1.0}, {2.0, 2.0}, {3.5, 2.0}};

std::vector<cplx> run(double half_width, double dx, double dt) {
  const OracleGrid g = free_grid(half_width, dx, dt);
  return evolve(sample(g), g, kProbes).amplitudes;
}

}  // namespace

TEST_CASE("free Gaussian packet follows the closed-form spreading solution") {
  const OracleGrid g = free_grid(30.0, 0.00125, 2.5e-4);
  const OracleReport rep = evolve(sample(g), g, kProbes);
  double worst = 0.0;
  for (std::size_t i = 0; i < kProbes.size(); ++i) {
    const double exact = std::norm(gaussian(kProbes[i].x, kProbes[i].t));
    worst = std::max(worst, std::abs(std::norm(rep.amplitudes[i]) - exact));
  }
  CHECK(worst < 1e-6);
  CHECK(rep.max_step_drift < 1e-10);
  CHECK(rep.total_drift < 1e-7);
}

TEST_CASE("Crank-Nicolson converges at second order in dt and dx") {
  auto slope = [](const std::vector<cplx>& a, const std::vector<cplx>& b, const std::vector<cplx>& c) {
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      d1 = std::max(d1, std::abs(a[i] - b[i]));
      d2 = std::max(d2, std::abs(b[i] - c[i]));
    }
    return std::log2(d1 / d2);
  };
  const double st = slope(run(30.0, 0.01, 0.02), run(30.0, 0.01, 0.01), run(30.0, 0.01, 0.005));
  CHECK(st >= 1.8);
  CHECK(st <= 2.2);
  const double sx = slope(run(60.0, 0.08, 1e-3), run(60.0, 0.04, 1e-3), run(60.0, 0.02, 1e-3));
  CHECK(sx >= 1.8);
  CHECK(sx <= 2.2);
}

TEST_CASE("dt halving and domain doubling leave probe densities unchanged") {
  const auto base = run(30.0, 0.01, 2e-3);
  const auto half = run(30.0, 0.01, 1e-3);
  const auto wide = run(60.0, 0.01, 2e-3);
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double rho = std::norm(base[i]);
    CHECK(std::abs(std::norm(half[i]) - rho) < 1e-5 * rho);
    CHECK(std::abs(std::norm(wide[i]) - rho) < 1e-5 * rho);
  }
}

TEST_CASE("cutoff plane wave preparation") {
  const MediumParams p = MediumParams::with_energy(1.0, 0.1, 0.067, 40.0);
  const double k = derive_scales(p).k;
  const OracleGrid g = barrier_grid(p, Structure::shutter, 0.01, 0.002, 1.0, 4.0);
  const auto sh = prepare_cutoff_plane_wave(k, g, Structure::shutter);
  const auto st = prepare_cutoff_plane_wave(k, g, Structure::step);
  // nodes straddle x = 0 at +-dx/2
  std::size_t i0 = 0;
  while (g.x(i0 + 1) < 0.0) ++i0;
  CHECK(std::abs(sh[i0]) < 2.0 * k * g.dx());
  CHECK(std::abs(sh[i0 + 1]) == 0.0);
  CHECK(std::abs(st[i0] - std::exp(I * k * g.x(i0))) < 1e-15);
  // untapered region: |2 sin kx|^2 integrates to 2(hi-lo) - (sin 2k hi - sin 2k lo)/k
  const std::size_t first = static_cast<std::size_t>(0.06 * static_cast<double>(g.nx));
  double sum = 0.0;
  for (std::size_t i = first; i <= i0; ++i) sum += std::norm(sh[i]) * g.dx();
  const double lo = g.x(first) - 0.5 * g.dx();
  const double hi = g.x(i0) + 0.5 * g.dx();
  const double analytic = 2.0 * (hi - lo) - (std::sin(2.0 * k * hi) - std::sin(2.0 * k * lo)) / k;
  CHECK(sum == doctest::Approx(analytic).epsilon(1e-4));
  CHECK(std::abs(sh.front()) < 1e-12);
}

TEST_CASE("free cutoff wave solves the free equation and has the right limits") {
  const double k = 0.9;
  double worst = 0.0;
  for (double x : {-2.0, -0.3, 0.4, 1.5})
    for (double t : {0.05, 0.5, 3.0}) {
      const double h = 2e-3;
      auto d2 = [&](double hh) {
        return (free_cutoff_wave(x + hh, t, k, kD) - 2.0 * free_cutoff_wave(x, t, k, kD) +
                free_cutoff_wave(x - hh, t, k, kD)) /
               (hh * hh);
      };
      const double ht = 1e-4 * t;
      auto dt = [&](double hh) {
        return (free_cutoff_wave(x, t + hh, k, kD) - free_cutoff_wave(x, t - hh, k, kD)) / (2.0 * hh);
      };
      const cplx lap = (4.0 * d2(h / 2) - d2(h)) / 3.0;
      const cplx ut = (4.0 * dt(ht / 2) - dt(ht)) / 3.0;
      worst = std::max(worst, std::abs(I * ut + kD * lap) / (std::abs(ut) + 1.0));
    }
  CHECK(worst < 1e-6);
  // far left the Fresnel ripple is of order sqrt(D t) / |x|
  CHECK(std::abs(free_cutoff_wave(-30.0, 1e-3, k, kD) - std::exp(I * k * -30.0) * std::polar(1.0, -kD * k * k * 1e-3)) <
        1e-3);
  CHECK(std::abs(free_cutoff_wave(30.0, 1e-3, k, kD)) < 1e-3);
  CHECK(std::abs(free_cutoff_wave(-1.0, 0.0, k, kD) - std::exp(-I * k)) < 1e-15);
  CHECK(free_cutoff_wave(1.0, 0.0, k, kD) == cplx(0.0));
  CHECK_THROWS_AS(free_cutoff_wave(1.0, -1.0, k, kD), DomainError);
}

TEST_CASE("split evolution reproduces the step solution at early times") {
  const MediumParams p = MediumParams::with_energy(1.0, 0.5);
  const double k = derive_scales(p).k;
  const OracleGrid g = barrier_grid(p, Structure::step, 0.01, 0.002, 1.0, 3.0);
  std::vector<ProbePoint> probes;
  for (double t : {0.25, 0.5, 1.0})
    for (double x : {0.05, 0.5, 1.0, 2.0, 3.0}) probes.push_back({x, t});
  const OracleReport rep = evolve_cutoff_plane_wave(k, g, Structure::step, probes);
  std::vector<double> model, oracle;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    model.push_back(std::norm(psi_step(probes[i].x, probes[i].t, p)));
    oracle.push_back(std::norm(rep.amplitudes[i]));
  }
  CHECK(relative_l2_density_error(model, oracle) < 2e-4);
}

TEST_CASE("oracle rejects probes outside the reflection-free region") {
  const OracleGrid g = free_grid(30.0, 0.02, 0.01);
  CHECK_THROWS_AS(evolve(sample(g), g, {{0.0, 10.0}}), DomainTruncationError);
  CHECK_THROWS_AS(evolve(sample(g), g, {{40.0, 0.1}}), DomainTruncationError);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 100, 0.01, 0.067, [](double) { return 0.0; }, 1.0), DomainError);
  const MediumParams p = MediumParams::with_energy(1.0, 0.5);
  const OracleGrid s = barrier_grid(p, Structure::step, 0.02, 0.005, 1.0, 3.0);
  CHECK_THROWS_AS(evolve_cutoff_plane_wave(derive_scales(p).k, s, Structure::step, {{1.0, 50.0}}),
                  DomainTruncationError);
  CHECK(relative_l2_density_error({1.0, 2.0}, {1.0, 2.0}) == 0.0);
  CHECK_THROWS_AS(relative_l2_density_error({1.0}, {1.0, 2.0}), DomainError);
}
