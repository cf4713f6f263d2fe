#pragma once

#include <optional>
#include <vector>

#include "forerunner/model.hpp"
#include "forerunner/resonances.hpp"

namespace forerunner {

struct FrequencyControl {
  // first finite-difference step, relative to t
  double h_rel = 1e-3;
  // required agreement under step halving
  double stability = 1e-4;
  // |Psi| must exceed amplitude_floor * reference_amplitude
  double amplitude_floor = 1e-10;
  double reference_amplitude = 1.0;
};

// -Im[(dPsi/dt) / Psi] in fs^-1.
double omega_av(const TimeSignal& signal, double t, const FrequencyControl& control = {});

struct TimeWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct PeakOptions {
  int coarse_points = 256;
  double refine_tol = 1e-6;
  // a maximum must exceed the window-start density and the next minimum
  // after it by this fraction
  double prominence = 1e-3;
};

struct PeakRecord {
  double x = 0.0;
  double t_p = 0.0;
  double density = 0.0;
  std::optional<double> omega_av;  // empty at a node
};

// First prominent interior maximum of |Psi|^2 in the window.
PeakRecord first_peak(const TimeSignal& signal, double x, TimeWindow window, const PeakOptions& options = {});

// Re-locate a peak from a previous estimate; a narrow window without the
// prominence test.
PeakRecord refine_peak(const TimeSignal& signal, double x, double seed, double half_width = 0.05);

struct WindowPolicy {
  // upper end as a multiple of hbar / (V - E0)
  double span_in_gap_times = 20.0;
  double widen_factor = 2.0;
  int max_widenings = 3;
};

TimeWindow default_window(const WaveModel& model, double x, const WindowPolicy& policy = {});

// first_peak on the default window, widened on monotonic signals.
PeakRecord find_peak(const WaveModel& model, double x, const WindowPolicy& policy = {},
                     const PeakOptions& options = {});

struct BasinScan {
  std::vector<PeakRecord> curve;
  PeakRecord minimum;
  bool interior_minimum = false;
  // least-squares dt_p/dx over the last quarter of the grid (fs/nm)
  double tail_slope = 0.0;
};

BasinScan basin_scan(const WaveModel& model, const std::vector<double>& x_grid, const WindowPolicy& policy = {},
                     const PeakOptions& options = {});

// Least-squares dt_p/dx over the curve points with lo <= x <= hi (fs/nm).
// Needs at least 3 points.
double slope_over(const std::vector<PeakRecord>& curve, double lo, double hi);

// First x along the curve where omega_av(t_p) crosses omega (linear interpolation).
std::optional<double> frequency_crossover(const std::vector<PeakRecord>& curve, double omega);

struct GapRecord {
  double E0 = 0.0;
  double t_p_min = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares of t_p_min against 1 / (V - E0).
LinearFit fit_tp_vs_inverse_gap(const std::vector<GapRecord>& records, double V);

struct TimeScales {
  double bl_time = 0.0;
  double tp_opaque = 0.0;
  std::optional<double> tp_basin;
  std::optional<double> tp_linear;
  double phase_time_asymptote = 0.0;

  // throw MissingDependencyError when no pole was supplied
  double basin() const;
  double linear() const;
};

// length is x for the semi-infinite models and L for the barrier.
TimeScales reference_timescales(const MediumParams& p, double length,
                                const std::optional<ResonancePole>& first_pole = std::nullopt);

// Real part of the complex energy of a pole (eV).
double pole_energy(const ResonancePole& pole, const MediumParams& p);

// Time after the forerunner peak where the pole term of the source model
// overtakes the saddle term.
double transition_time(double x, const MediumParams& p);

}  // namespace forerunner
