#include "forerunner/params.hpp"

#include <cmath>
#include <string>

#include "forerunner/errors.hpp"

namespace forerunner {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::regime: return "tunneling-regime";
    case ErrorCode::convergence: return "convergence";
    case ErrorCode::pole_search: return "pole-search";
    case ErrorCode::seeding: return "seeding";
    case ErrorCode::normalization: return "normalization";
    case ErrorCode::monotonic_signal: return "monotonic-signal";
    case ErrorCode::fit: return "fit";
    case ErrorCode::missing_dependency: return "missing-dependency";
    case ErrorCode::no_transition: return "no-transition";
    case ErrorCode::undefined_frequency: return "undefined-frequency";
    case ErrorCode::quadrature: return "quadrature";
    case ErrorCode::domain_truncation: return "domain-truncation";
    case ErrorCode::numerical: return "numerical";
    case ErrorCode::overflow: return "overflow";
    case ErrorCode::singular_point: return "singular-point";
  }
  return "unknown";
}

MediumParams MediumParams::with_energy(double V, double E0, double mass_ratio,
                                       std::optional<double> L) {
  MediumParams p;
  p.V = V;
  p.E0 = E0;
  p.mass_ratio = mass_ratio;
  p.L = L;
  validate(p);
  return p;
}

MediumParams MediumParams::with_fraction(double V, double E0_over_V, double mass_ratio,
                                         std::optional<double> L) {
  return with_energy(V, E0_over_V * V, mass_ratio, L);
}

double MediumParams::hbar_sq_over_2m() const {
  return kConstants.hbar_sq_over_me / (2.0 * mass_ratio);
}

double MediumParams::hbar_over_2m() const { return hbar_sq_over_2m() / kConstants.hbar; }

double MediumParams::mass() const { return kConstants.hbar / (2.0 * hbar_over_2m()); }

double MediumParams::barrier_wavenumber() const { return std::sqrt(V / hbar_sq_over_2m()); }

double MediumParams::length() const {
  if (!L) throw MissingDependencyError("barrier length L is required for this model");
  return *L;
}

void validate(const MediumParams& p) {
  auto bad = [](double v) { return !std::isfinite(v) || v <= 0.0; };
  if (bad(p.mass_ratio)) throw DomainError("mass_ratio must be positive and finite");
  if (bad(p.V)) throw DomainError("V must be positive and finite");
  if (bad(p.E0)) throw DomainError("E0 must be positive and finite");
  if (p.L && bad(*p.L)) throw DomainError("L must be positive and finite");
}

DerivedScales derive_scales(const MediumParams& p) {
  validate(p);
  if (p.E0 >= p.V)
    throw RegimeError("E0 = " + std::to_string(p.E0) + " eV is not below V = " +
                      std::to_string(p.V) + " eV");
  const double c = p.hbar_sq_over_2m();
  DerivedScales s{};
  s.k = std::sqrt(p.E0 / c);
  s.kappa0 = std::sqrt((p.V - p.E0) / c);
  s.v_sc = 2.0 * p.hbar_over_2m() * s.kappa0;
  s.omega0 = p.E0 / kConstants.hbar;
  s.omegaV = p.V / kConstants.hbar;
  s.penetration_length = 1.0 / s.kappa0;
  return s;
}

double opacity(const MediumParams& p) {
  validate(p);
  return p.length() * p.barrier_wavenumber();
}

double energy_from_wavenumber(double k, const MediumParams& p) { return p.hbar_sq_over_2m() * k * k; }

}  // namespace forerunner
