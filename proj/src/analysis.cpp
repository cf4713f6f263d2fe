#include "forerunner/analysis.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "forerunner/errors.hpp"
#include "forerunner/source.hpp"

namespace forerunner {
namespace {

double density(const TimeSignal& s, double t) { return std::norm(s.value(t)); }

cplx derivative_fd(const TimeSignal& s, double t, double h) {
  auto central = [&](double hh) { return (s.value(t + hh) - s.value(t - hh)) / (2.0 * hh); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

// d|Psi|^2/dt
double density_slope(const TimeSignal& s, double t, double h) {
  const cplx v = s.value(t);
  const std::optional<cplx> d = s.derivative(t);
  const cplx dv = d ? *d : derivative_fd(s, t, h);
  return 2.0 * std::real(std::conj(v) * dv);
}

void check_window(const TimeWindow& w) {
  if (!std::isfinite(w.lo) || !std::isfinite(w.hi) || w.lo < 0.0 || !(w.hi > w.lo))
    throw DomainError("peak search needs a window 0 <= lo < hi");
}

PeakRecord refine_bracket(const TimeSignal& s, double x, double a, double b, double refine_tol) {
  const double h = 1e-4 * (b - a);
  const double fa = density_slope(s, a, h);
  const double fb = density_slope(s, b, h);
  double t_p;
  if (fa > 0.0 && fb < 0.0) {
    // root of the density slope; the bracket shrinks far below refine_tol
    boost::math::tools::eps_tolerance<double> tol(48);
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve([&](double t) { return density_slope(s, t, h); }, a, b, fa, fb,
                                                     tol, iters);
    t_p = 0.5 * (r.first + r.second);
    if (!(r.second - r.first <= refine_tol * t_p)) throw ConvergenceError("peak refinement did not converge", a, b);
  } else {
    const int bits = std::max(10, static_cast<int>(-std::log2(refine_tol)) + 2);
    const auto r = boost::math::tools::brent_find_minima([&](double t) { return -density(s, t); }, a, b,
                                                         std::min(bits, 26));
    t_p = r.first;
  }
  PeakRecord rec;
  rec.x = x;
  rec.t_p = t_p;
  rec.density = density(s, t_p);
  FrequencyControl fc;
  fc.reference_amplitude = std::sqrt(rec.density);
  try {
    rec.omega_av = omega_av(s, t_p, fc);
  } catch (const UndefinedFrequencyError&) {
    rec.omega_av.reset();
  }
  return rec;
}

double ols_slope(const std::vector<PeakRecord>& c, std::size_t begin, std::size_t end) {
  const double n = static_cast<double>(end - begin);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    mx += c[i].x;
    my += c[i].t_p;
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    sxy += (c[i].x - mx) * (c[i].t_p - my);
    sxx += (c[i].x - mx) * (c[i].x - mx);
  }
  return sxy / sxx;
}

}  // namespace

double omega_av(const TimeSignal& s, double t, const FrequencyControl& c) {
  if (!std::isfinite(t) || t <= 0.0) throw DomainError("omega_av needs t > 0");
  const cplx v = s.value(t);
  if (!(std::abs(v) > c.amplitude_floor * c.reference_amplitude)) {
    std::ostringstream os;
    os << "local frequency undefined at t=" << t << " fs: |Psi| = " << std::abs(v) << " is below the floor";
    throw UndefinedFrequencyError(os.str());
  }
  if (const std::optional<cplx> d = s.derivative(t)) return -std::imag(*d / v);
  double h = std::min(c.h_rel * t, 0.25 * t);
  double previous = -std::imag(derivative_fd(s, t, h) / v);
  for (int i = 0; i < 8; ++i) {
    h *= 0.5;
    const double w = -std::imag(derivative_fd(s, t, h) / v);
    if (std::abs(w - previous) <= c.stability * std::max(std::abs(w), 1e-12)) return w;
    previous = w;
  }
  throw ConvergenceError("finite-difference local frequency is not stable under step halving", previous, previous);
}

PeakRecord first_peak(const TimeSignal& s, double x, TimeWindow w, const PeakOptions& o) {
  check_window(w);
  if (o.coarse_points < 64) throw DomainError("peak search needs at least 64 coarse points");
  const int n = o.coarse_points;
  std::vector<double> t(static_cast<std::size_t>(n)), rho(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    t[i] = w.lo + (w.hi - w.lo) * static_cast<double>(i + 1) / n;
    rho[i] = density(s, t[i]);
  }
  for (int i = 1; i + 1 < n; ++i) {
    if (!(rho[i] > rho[i - 1] && rho[i] >= rho[i + 1])) continue;
    // prominence against the window start and the next minimum (or the window end)
    int j = i + 1;
    while (j + 1 < n && rho[j + 1] <= rho[j]) ++j;
    if (rho[i] >= (1.0 + o.prominence) * std::max(rho.front(), rho[j])) {
      PeakRecord rec = refine_bracket(s, x, t[i - 1], t[i + 1], o.refine_tol);
      if (rec.density < rho[i]) {
        rec.t_p = t[i];
        rec.density = rho[i];
      }
      return rec;
    }
  }
  std::ostringstream os;
  os << "no interior maximum of |Psi|^2 at x=" << x << " nm in (" << w.lo << ", " << w.hi << "] fs";
  throw MonotonicSignalError(os.str());
}

PeakRecord refine_peak(const TimeSignal& s, double x, double seed, double half_width) {
  if (!(seed > 0.0) || !(half_width > 0.0) || half_width >= 1.0) throw DomainError("invalid peak seed");
  PeakOptions o;
  o.coarse_points = 64;
  o.prominence = 0.0;
  return first_peak(s, x, {seed * (1.0 - half_width), seed * (1.0 + half_width)}, o);
}

TimeWindow default_window(const WaveModel& m, double x, const WindowPolicy& pol) {
  const MediumParams& p = m.params();
  const double hi = pol.span_in_gap_times * kConstants.hbar / (p.V - p.E0);
  return {std::max(0.0, m.earliest_time(x)), hi};
}

PeakRecord find_peak(const WaveModel& m, double x, const WindowPolicy& pol, const PeakOptions& o) {
  const auto signal = m.at(x);
  TimeWindow w = default_window(m, x, pol);
  for (int attempt = 0;; ++attempt) {
    try {
      return first_peak(*signal, x, w, o);
    } catch (const MonotonicSignalError&) {
      if (attempt >= pol.max_widenings) throw;
      w.hi *= pol.widen_factor;
    }
  }
}

BasinScan basin_scan(const WaveModel& m, const std::vector<double>& xs, const WindowPolicy& pol, const PeakOptions& o) {
  if (xs.size() < 8) throw DomainError("basin scan needs at least 8 positions");
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!(xs[i] > 0.0) || (i > 0 && !(xs[i] > xs[i - 1]))) throw DomainError("basin grid must be positive and increasing");
  BasinScan out;
  for (double x : xs) out.curve.push_back(find_peak(m, x, pol, o));

  const auto it = std::min_element(out.curve.begin(), out.curve.end(),
                                   [](const PeakRecord& a, const PeakRecord& b) { return a.t_p < b.t_p; });
  const auto j = static_cast<std::size_t>(it - out.curve.begin());
  out.minimum = *it;
  out.interior_minimum = j > 0 && j + 1 < xs.size();
  if (out.interior_minimum) {
    // vertex of the parabola through the minimum and its neighbours
    const double x0 = xs[j - 1], x1 = xs[j], x2 = xs[j + 1];
    const double y0 = out.curve[j - 1].t_p, y1 = out.curve[j].t_p, y2 = out.curve[j + 1].t_p;
    const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
    const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    if (den != 0.0) {
      const double xv = x1 - 0.5 * num / den;
      if (xv > x0 && xv < x2) {
        const auto signal = m.at(xv);
        try {
          const PeakRecord r = refine_peak(*signal, xv, out.minimum.t_p, 0.1);
          if (r.t_p < out.minimum.t_p) out.minimum = r;
        } catch (const MonotonicSignalError&) {
        }
      }
    }
  }

  const std::size_t tail = std::max<std::size_t>(3, xs.size() / 4);
  out.tail_slope = ols_slope(out.curve, xs.size() - tail, xs.size());
  return out;
}

double slope_over(const std::vector<PeakRecord>& curve, double lo, double hi) {
  std::vector<PeakRecord> sel;
  for (const PeakRecord& r : curve)
    if (r.x >= lo && r.x <= hi) sel.push_back(r);
  if (sel.size() < 3) throw FitError("slope needs at least 3 points in the x range");
  return ols_slope(sel, 0, sel.size());
}

std::optional<double> frequency_crossover(const std::vector<PeakRecord>& curve, double omega) {
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (!curve[i - 1].omega_av || !curve[i].omega_av) continue;
    const double a = *curve[i - 1].omega_av - omega;
    const double b = *curve[i].omega_av - omega;
    if (a < 0.0 && b >= 0.0) return curve[i - 1].x + (curve[i].x - curve[i - 1].x) * a / (a - b);
  }
  return std::nullopt;
}

LinearFit fit_tp_vs_inverse_gap(const std::vector<GapRecord>& r, double V) {
  if (r.size() < 4) throw FitError("fit needs at least 4 points");
  std::vector<double> u;
  for (const GapRecord& g : r) {
    if (!(g.E0 < V) || !std::isfinite(g.t_p_min)) throw FitError("fit needs E0 < V and finite times");
    u.push_back(1.0 / (V - g.E0));
  }
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j)
      if (r[i].E0 == r[j].E0) throw FitError("fit needs distinct E0 values");
  const double n = static_cast<double>(r.size());
  double mu = 0.0, my = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    mu += u[i];
    my += r[i].t_p_min;
  }
  mu /= n;
  my /= n;
  double suu = 0.0, suy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suy += (u[i] - mu) * (r[i].t_p_min - my);
    syy += (r[i].t_p_min - my) * (r[i].t_p_min - my);
  }
  if (!(suu > 1e-14 * mu * mu * n)) throw FitError("fit is rank deficient");
  LinearFit f;
  f.slope = suy / suu;
  f.intercept = my - f.slope * mu;
  f.r_squared = syy > 0.0 ? suy * suy / (suu * syy) : 1.0;
  return f;
}

double TimeScales::basin() const {
  if (!tp_basin) throw MissingDependencyError("basin time needs the first resonance pole");
  return *tp_basin;
}

double TimeScales::linear() const {
  if (!tp_linear) throw MissingDependencyError("linear-regime time needs the first resonance pole");
  return *tp_linear;
}

double pole_energy(const ResonancePole& pole, const MediumParams& p) {
  return std::real(p.hbar_sq_over_2m() * pole.k * pole.k);
}

TimeScales reference_timescales(const MediumParams& p, double length, const std::optional<ResonancePole>& pole) {
  if (!std::isfinite(length) || length <= 0.0) throw DomainError("time scales need a positive length");
  const DerivedScales s = derive_scales(p);
  TimeScales ts;
  ts.bl_time = length * p.mass() / (s.kappa0 * kConstants.hbar);
  ts.tp_opaque = ts.bl_time / std::sqrt(3.0);
  ts.phase_time_asymptote = 2.0 / (s.v_sc * s.k);
  if (pole) {
    const double eps1 = pole_energy(*pole, p);
    if (!(eps1 > p.E0)) throw DomainError("first resonance lies below the incident energy");
    ts.tp_basin = kConstants.hbar * std::numbers::pi / (eps1 - p.E0);
    const double v1 = kConstants.hbar * pole->k.real() / p.mass();
    ts.tp_linear = length / v1;
  }
  return ts;
}

double transition_time(double x, const MediumParams& p) {
  const DerivedScales s = derive_scales(p);
  if (!std::isfinite(x) || x <= 0.0) throw DomainError("transition time needs x > 0");
  if (x * s.kappa0 < 3.0) {
    std::ostringstream os;
    os << "no pole/saddle transition below x kappa0 = 3 (x kappa0 = " << x * s.kappa0 << ")";
    throw NoTransitionError(os.str());
  }
  const SourceModel model(p);
  const PeakRecord peak = find_peak(model, x);
  auto gap = [&](double t) { return std::abs(psi_pole(x, t, p)) - std::abs(psi_saddle(x, t, p)); };
  if (gap(peak.t_p) >= 0.0) throw NoTransitionError("pole term already dominates at the forerunner peak");
  // the saddle term decays like t^(-3/2) once the pole term is on, so the
  // crossing can lie many decades beyond the peak: geometric search
  double a = peak.t_p;
  const double ratio = 1.02;
  const double cap = peak.t_p * 1e15;
  while (a < cap) {
    const double b = a * ratio;
    if (gap(b) >= 0.0) {
      // the pole term switches on discontinuously at tau, so plain bisection
      const auto r = boost::math::tools::bisect([&](double t) { return gap(t) >= 0.0 ? 1.0 : -1.0; }, a, b,
                                                [](double l, double u) { return u - l <= 1e-7 * u; });
      return r.second;
    }
    a = b;
  }
  throw NoTransitionError("no pole/saddle crossing within fifteen decades of the peak time");
}

}  // namespace forerunner
