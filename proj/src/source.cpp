#include "forerunner/source.hpp"

#include <cmath>
#include <numbers>

#include "forerunner/errors.hpp"

namespace forerunner {
namespace {

const cplx kI{0.0, 1.0};
const cplx kEighth = std::polar(1.0, std::numbers::pi / 4.0);

void check_position(double x) {
  if (!std::isfinite(x) || x < 0.0) throw DomainError("position must satisfy x >= 0");
}

void check_time(double t) {
  if (!std::isfinite(t) || t <= 0.0) throw DomainError("time must satisfy t > 0");
}

// exp(i(-tV/hbar + x^2/(4 C^2 t))) with the phase reduced in long double.
cplx source_phase(double x, double t, const MediumParams& p) {
  const long double C2 = p.hbar_over_2m();
  long double phi = -static_cast<long double>(t) * p.V / kConstants.hbar +
                    static_cast<long double>(x) * x / (4.0L * C2 * t);
  constexpr long double two_pi = 6.283185307179586476925286766559L;
  if (std::fabs(phi) > 1.0e3L) phi = std::fmod(phi, two_pi);
  return std::polar(1.0, static_cast<double>(phi));
}

double source_phase_rate(double x, double t, const MediumParams& p) {
  return -p.V / kConstants.hbar - x * x / (4.0 * p.hbar_over_2m() * t * t);
}

// z1 = -u0', z2 = -u0''. z1 always lies in the upper half-plane.
struct Arguments {
  cplx z1, z2, dz1, dz2;
  double tau, kappa0, omega0;
};

Arguments arguments(double x, double t, const MediumParams& p) {
  const DerivedScales s = derive_scales(p);
  const double C = std::sqrt(p.hbar_over_2m());
  const double tau = x / s.v_sc;
  const double rt = std::sqrt(t);
  const cplx a = kEighth * C * s.kappa0;
  Arguments g{};
  g.z1 = a * cplx(tau / rt, rt);
  g.z2 = a * cplx(tau / rt, -rt);
  g.dz1 = a * cplx(-tau / (2.0 * t * rt), 0.5 / rt);
  g.dz2 = a * cplx(-tau / (2.0 * t * rt), -0.5 / rt);
  g.tau = tau;
  g.kappa0 = s.kappa0;
  g.omega0 = s.omega0;
  return g;
}

}  // namespace

SourceArguments source_arguments(double x, double t, const MediumParams& p) {
  check_position(x);
  check_time(t);
  const Arguments g = arguments(x, t, p);
  return {-g.z1, -g.z2, g.tau, std::sqrt(p.hbar_over_2m())};
}

cplx psi_source(double x, double t, const MediumParams& p) {
  check_position(x);
  if (std::isnan(t)) throw DomainError("time is NaN");
  if (t <= 0.0) return 0.0;
  const Arguments g = arguments(x, t, p);
  const cplx e = source_phase(x, t, p);
  if (g.z2.imag() >= 0.0) return 0.5 * e * (faddeeva_w(g.z1) + faddeeva_w(g.z2));
  // t > tau: 2 exp(-z2^2) from the reflection of w(z2) combines with the
  // prefactor into the pole term exactly.
  const cplx pole = std::exp(-g.kappa0 * x) * std::polar(1.0, -g.omega0 * t);
  return pole + 0.5 * e * (faddeeva_w(g.z1) - faddeeva_w(-g.z2));
}

cplx dpsi_dt_source(double x, double t, const MediumParams& p) {
  check_position(x);
  check_time(t);
  const Arguments g = arguments(x, t, p);
  const cplx e = source_phase(x, t, p);
  const double rate = source_phase_rate(x, t, p);
  if (g.z2.imag() >= 0.0) {
    const cplx psi = 0.5 * e * (faddeeva_w(g.z1) + faddeeva_w(g.z2));
    return kI * rate * psi +
           0.5 * e * (faddeeva_w_derivative(g.z1) * g.dz1 + faddeeva_w_derivative(g.z2) * g.dz2);
  }
  const cplx pole = std::exp(-g.kappa0 * x) * std::polar(1.0, -g.omega0 * t);
  const cplx rest = 0.5 * e * (faddeeva_w(g.z1) - faddeeva_w(-g.z2));
  return -kI * g.omega0 * pole + kI * rate * rest +
         0.5 * e * (faddeeva_w_derivative(g.z1) * g.dz1 + faddeeva_w_derivative(-g.z2) * g.dz2);
}

cplx psi_pole(double x, double t, const MediumParams& p) {
  check_position(x);
  const DerivedScales s = derive_scales(p);
  if (t < x / s.v_sc || t <= 0.0) return 0.0;
  return std::exp(-s.kappa0 * x) * std::polar(1.0, -s.omega0 * t);
}

cplx psi_saddle(double x, double t, const MediumParams& p) {
  const SourceArguments a = source_arguments(x, t, p);
  if (a.u0_prime == 0.0 || a.u0_doubleprime == 0.0)
    throw SingularPointError("saddle term is singular at a vanishing argument");
  const cplx e = source_phase(x, t, p);
  return e * (1.0 / a.u0_prime + 1.0 / a.u0_doubleprime) /
         (2.0 * kI * std::sqrt(std::numbers::pi));
}

double omega_saddle(double x, double t, const MediumParams& p) {
  check_time(t);
  validate(p);
  return p.V / kConstants.hbar + x * x / (4.0 * p.hbar_over_2m() * t * t);
}

SourceModel::SourceModel(MediumParams p) : params_(p) { derive_scales(params_); }

std::unique_ptr<TimeSignal> SourceModel::at(double x) const {
  check_position(x);
  const MediumParams p = params_;
  return std::make_unique<FunctionSignal>([x, p](double t) { return psi_source(x, t, p); },
                                          [x, p](double t) { return dpsi_dt_source(x, t, p); });
}

}  // namespace forerunner
