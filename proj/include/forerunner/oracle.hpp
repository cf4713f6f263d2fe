#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "forerunner/params.hpp"

namespace forerunner {

using cplx = std::complex<double>;

struct OracleGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t nx = 0;
  double dt = 0.0;
  std::vector<double> potential;  // eV at each node
  double mass_ratio = 0.067;
  // Fastest group velocity (nm/fs) assumed for the light-cone check.
  double signal_speed = 0.0;

  double dx() const { return (x_max - x_min) / static_cast<double>(nx - 1); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
};

OracleGrid make_grid(double x_min, double x_max, std::size_t nx, double dt, double mass_ratio,
                     const std::function<double(double)>& potential, double signal_speed);

enum class Structure { shutter, step };

// Grid for the shutter (square barrier on [0, L]) or step potential with node
// spacing close to dx and the potential edges on cell midpoints. The
// domain is sized from the light cone of t_max and the probe reach x_probe.
OracleGrid barrier_grid(const MediumParams& p, Structure s, double dx, double dt, double t_max, double x_probe);

struct ProbePoint {
  double x;
  double t;
};

struct OracleReport {
  std::vector<cplx> amplitudes;  // same order as probes
  double max_step_drift = 0.0;
  double total_drift = 0.0;
  std::size_t steps = 0;
};

// Crank-Nicolson evolution with hard walls; probes by local cubic interpolation.
OracleReport evolve(const std::vector<cplx>& initial, const OracleGrid& grid, const std::vector<ProbePoint>& probes);

// exp(ikx) - exp(-ikx) (shutter) or exp(ikx) (step) for x <= 0, zero beyond,
// tapered smoothly to zero across the leftmost 5% of the domain.
std::vector<cplx> prepare_cutoff_plane_wave(double k, const OracleGrid& grid, Structure s);

// Free-particle evolution of exp(ikx) Theta(-x), D = hbar / 2m in nm^2/fs.
cplx free_cutoff_wave(double x, double t, double k, double D);

// Evolves the cutoff plane wave of the given structure as a reference wave plus
// a Crank-Nicolson remainder. The reference is the free solution times
// exp(-i V s(x) t / hbar), s a smooth ramp of width ramp_width following the
// potential, so the remainder is sourced only next to the potential edges.
// No taper: the reference carries the infinite extent to the left. The
// remainder is outgoing at the walls and is absorbed in layers of layer_width.
OracleReport evolve_cutoff_plane_wave(double k, const OracleGrid& grid, Structure s, const std::vector<ProbePoint>& probes,
                                      double ramp_width = 5.0, double layer_width = 25.0);

// Relative L2 density error sqrt(sum (a-b)^2 / sum b^2).
double relative_l2_density_error(const std::vector<double>& model, const std::vector<double>& oracle);

}  // namespace forerunner
