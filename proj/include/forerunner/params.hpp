#pragma once

#include <optional>

namespace forerunner {

// Units throughout: eV, nm, fs.
struct PhysicalConstants {
  double hbar;             // eV fs
  double hbar_sq_over_me;  // eV nm^2
};

inline constexpr PhysicalConstants kConstants{0.6582119569, 0.0761996};

struct MediumParams {
  double mass_ratio = 0.067;
  double V = 0.0;
  double E0 = 0.0;
  std::optional<double> L;

  static MediumParams with_energy(double V, double E0, double mass_ratio = 0.067,
                                  std::optional<double> L = std::nullopt);
  static MediumParams with_fraction(double V, double E0_over_V, double mass_ratio = 0.067,
                                    std::optional<double> L = std::nullopt);

  // hbar^2 / 2m in eV nm^2
  double hbar_sq_over_2m() const;
  // hbar / 2m in nm^2 / fs
  double hbar_over_2m() const;
  // m in eV fs^2 / nm^2
  double mass() const;
  // sqrt(2 m V) / hbar in 1/nm
  double barrier_wavenumber() const;
  double length() const;  // throws MissingDependencyError when L is absent
};

struct DerivedScales {
  double k;
  double kappa0;
  double v_sc;
  double omega0;
  double omegaV;
  double penetration_length;
};

// Throws DomainError on non-positive inputs.
void validate(const MediumParams& p);

// Throws RegimeError when E0 >= V.
DerivedScales derive_scales(const MediumParams& p);

// L sqrt(2 m V) / hbar
double opacity(const MediumParams& p);

double energy_from_wavenumber(double k, const MediumParams& p);

}  // namespace forerunner
