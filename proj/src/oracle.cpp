#include "forerunner/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "forerunner/errors.hpp"
#include "forerunner/faddeeva.hpp"

namespace forerunner {
namespace {

constexpr double kDefaultRamp = 5.0;
constexpr double kDefaultLayer = 25.0;
// eV at the wall
constexpr double kLayerStrength = 50.0;

const cplx kI{0.0, 1.0};

// potential at node i, minus i W when an absorbing profile is given
cplx site(const OracleGrid& g, const std::vector<double>& absorber, std::size_t i) {
  return absorber.empty() ? cplx(g.potential[i]) : cplx(g.potential[i], -absorber[i]);
}

// LU factors of (1 + i dt H / 2 hbar) for the Thomas algorithm.
struct Factor {
  std::vector<cplx> diag_inv;  // 1 / modified diagonal
  std::vector<cplx> upper;     // modified super-diagonal
  cplx off;                    // constant off-diagonal
};

Factor factorize(const OracleGrid& g, double dt, const std::vector<double>& absorber = {}) {
  const double c = kConstants.hbar_sq_over_me / (2.0 * g.mass_ratio);
  const double dx = g.dx();
  const cplx a = kI * dt / (2.0 * kConstants.hbar);
  const cplx off = -a * c / (dx * dx);
  Factor f;
  f.off = off;
  f.diag_inv.resize(g.nx);
  f.upper.resize(g.nx);
  cplx prev_upper = 0.0;
  for (std::size_t i = 0; i < g.nx; ++i) {
    const cplx d = 1.0 + a * (2.0 * c / (dx * dx) + site(g, absorber, i)) - off * prev_upper;
    if (std::abs(d) < 1e-300) throw NumericalError("Crank-Nicolson factorization broke down");
    f.diag_inv[i] = 1.0 / d;
    f.upper[i] = off * f.diag_inv[i];
    prev_upper = f.upper[i];
  }
  return f;
}

void step(std::vector<cplx>& psi, std::vector<cplx>& rhs, const OracleGrid& g, const Factor& f, double dt,
          const std::vector<cplx>* source = nullptr, const std::vector<double>& absorber = {}) {
  const double c = kConstants.hbar_sq_over_me / (2.0 * g.mass_ratio);
  const double dx = g.dx();
  const cplx a = kI * dt / (2.0 * kConstants.hbar);
  const cplx off = a * c / (dx * dx);
  const std::size_t n = g.nx;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx left = i > 0 ? psi[i - 1] : cplx(0.0);
    const cplx right = i + 1 < n ? psi[i + 1] : cplx(0.0);
    rhs[i] = (1.0 - a * (2.0 * c / (dx * dx) + site(g, absorber, i))) * psi[i] + off * (left + right);
  }
  if (source)
    for (std::size_t i = 0; i < n; ++i) rhs[i] -= 2.0 * a * (*source)[i];
  // forward sweep
  cplx prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    prev = (rhs[i] - f.off * prev) * f.diag_inv[i];
    rhs[i] = prev;
  }
  psi[n - 1] = rhs[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) psi[i] = rhs[i] - f.upper[i] * psi[i + 1];
}

double norm2(const std::vector<cplx>& psi, double dx) {
  double s = 0.0;
  for (const cplx& v : psi) s += std::norm(v);
  return s * dx;
}

cplx interpolate(const std::vector<cplx>& psi, const OracleGrid& g, double x) {
  const double u = (x - g.x_min) / g.dx();
  auto i = static_cast<std::ptrdiff_t>(std::floor(u)) - 1;
  i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(g.nx) - 4);
  const double s = u - static_cast<double>(i);
  cplx r = 0.0;
  for (int j = 0; j < 4; ++j) {
    double w = 1.0;
    for (int m = 0; m < 4; ++m)
      if (m != j) w *= (s - m) / static_cast<double>(j - m);
    r += w * psi[static_cast<std::size_t>(i + j)];
  }
  return r;
}

void check_probe(const OracleGrid& g, const ProbePoint& p, bool split) {
  const double span = g.x_max - g.x_min;
  const double taper_edge = g.x_min + 0.05 * span;
  const double reach = g.signal_speed * p.t;
  const bool inside = p.x > g.x_min + 2.0 * g.dx() && p.x < g.x_max - 2.0 * g.dx() && p.t >= 0.0;
  // split evolutions apply their own echo rule
  bool causal = true;
  if (!split) {
    // taper front must not arrive; echoes of the x = 0 edge off either wall must not return
    causal = p.x - taper_edge > reach && (2.0 * g.x_max - p.x) > reach && (p.x - 2.0 * g.x_min) > reach;
  }
  if (!inside || !causal) {
    std::ostringstream os;
    os << "probe (x=" << p.x << " nm, t=" << p.t << " fs) lies outside the reflection-free region of the oracle grid";
    throw DomainTruncationError(os.str());
  }
}

}  // namespace

OracleGrid make_grid(double x_min, double x_max, std::size_t nx, double dt, double mass_ratio,
                     const std::function<double(double)>& potential, double signal_speed) {
  if (nx < 1024) throw DomainError("oracle grid needs at least 1024 nodes");
  if (!(x_max > x_min) || !(dt > 0.0) || !(mass_ratio > 0.0) || !(signal_speed >= 0.0))
    throw DomainError("invalid oracle grid");
  OracleGrid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.nx = nx;
  g.dt = dt;
  g.mass_ratio = mass_ratio;
  g.signal_speed = signal_speed;
  g.potential.resize(nx);
  for (std::size_t i = 0; i < nx; ++i) g.potential[i] = potential(g.x(i));
  return g;
}

OracleGrid barrier_grid(const MediumParams& p, Structure s, double dx, double dt, double t_max, double x_probe) {
  const DerivedScales sc = derive_scales(p);
  const double K = p.barrier_wavenumber();
  const double k_max = 4.0 * std::max(sc.k, K);
  const double v = 2.0 * p.hbar_over_2m() * k_max;
  const double reach = v * t_max;
  const double left = 0.5 * reach + 10.0 + kDefaultLayer;
  const double edge = s == Structure::shutter ? p.length() : kDefaultRamp;
  const double right = std::max(x_probe + 10.0, 0.5 * (reach + x_probe + edge) + 10.0) + kDefaultLayer;
  // nodes at (j + 1/2) dx so that 0 and L sit on midpoints
  double h = dx;
  if (s == Structure::shutter) h = p.length() / std::ceil(p.length() / dx);
  const double nl = std::ceil(left / h);
  const double nr = std::ceil(right / h);
  const double x_min = -(nl + 0.5) * h;
  const double x_max = (nr + 0.5) * h;
  const auto nx = static_cast<std::size_t>(nl + nr + 2.0);
  const double V = p.V;
  std::function<double(double)> pot;
  if (s == Structure::shutter) {
    const double L = p.length();
    pot = [V, L](double x) { return (x > 0.0 && x < L) ? V : 0.0; };
  } else {
    pot = [V](double x) { return x > 0.0 ? V : 0.0; };
  }
  return make_grid(x_min, x_max, nx, dt, p.mass_ratio, pot, v);
}

std::vector<cplx> prepare_cutoff_plane_wave(double k, const OracleGrid& g, Structure s) {
  std::vector<cplx> psi(g.nx, 0.0);
  const double span = g.x_max - g.x_min;
  const double w = 0.05 * span;
  for (std::size_t i = 0; i < g.nx; ++i) {
    const double x = g.x(i);
    if (x > 0.0) continue;
    cplx v = std::exp(kI * k * x);
    if (s == Structure::shutter) v -= std::exp(-kI * k * x);
    const double u = (x - g.x_min) / w;
    if (u < 1.0) {
      // C-infinity ramp from 0 to 1
      auto bump = [](double y) { return y > 0.0 ? std::exp(-1.0 / y) : 0.0; };
      v *= bump(u) / (bump(u) + bump(1.0 - u));
    }
    psi[i] = v;
  }
  return psi;
}

OracleReport evolve(const std::vector<cplx>& initial, const OracleGrid& g, const std::vector<ProbePoint>& probes) {
  if (initial.size() != g.nx) throw DomainError("initial state does not match the oracle grid");
  if (g.potential.size() != g.nx) throw DomainError("potential profile does not match the oracle grid");
  for (const ProbePoint& p : probes) check_probe(g, p, false);

  std::vector<std::size_t> order(probes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return probes[a].t < probes[b].t; });

  OracleReport rep;
  rep.amplitudes.resize(probes.size());
  std::vector<cplx> psi = initial;
  std::vector<cplx> work(g.nx);
  const double dx = g.dx();
  const double n0 = norm2(psi, dx);
  if (!(n0 > 0.0)) throw DomainError("initial state has zero norm");
  double n_prev = n0;
  double t = 0.0;
  std::map<double, Factor> factors;

  for (std::size_t idx : order) {
    const double target = probes[idx].t;
    if (target > t) {
      const double gap = target - t;
      const auto n = static_cast<std::size_t>(std::ceil(gap / g.dt * (1.0 - 1e-12)));
      const double h = gap / static_cast<double>(n);
      auto it = factors.find(h);
      if (it == factors.end()) it = factors.emplace(h, factorize(g, h)).first;
      for (std::size_t s = 0; s < n; ++s) {
        step(psi, work, g, it->second, h);
        const double nn = norm2(psi, dx);
        const double drift = std::abs(nn - n_prev) / n_prev;
        rep.max_step_drift = std::max(rep.max_step_drift, drift);
        if (!(drift < 1e-10)) throw NumericalError("Crank-Nicolson norm drift exceeded 1e-10 in one step");
        n_prev = nn;
        ++rep.steps;
      }
      t = target;
    }
    rep.amplitudes[idx] = interpolate(psi, g, probes[idx].x);
  }
  rep.total_drift = std::abs(n_prev - n0) / n0;
  if (!(rep.total_drift < 1e-7)) throw NumericalError("Crank-Nicolson total norm drift exceeded 1e-7");
  return rep;
}

cplx free_cutoff_wave(double x, double t, double k, double D) {
  if (t < 0.0 || !std::isfinite(t) || !std::isfinite(x)) throw DomainError("free cutoff wave needs finite x and t >= 0");
  if (t == 0.0) return x < 0.0 ? std::exp(kI * k * x) : (x == 0.0 ? std::exp(kI * k * x) * 0.5 : cplx(0.0));
  const double sq = std::sqrt(D * t);
  const cplx zeta = std::polar(1.0, -std::numbers::pi / 4.0) * ((x - 2.0 * D * k * t) / (2.0 * sq));
  const long double ph = static_cast<long double>(x) * x / (4.0L * D * t);
  const double phase = static_cast<double>(std::fmod(ph, 2.0L * std::numbers::pi_v<long double>));
  return std::polar(1.0, phase) * moshinsky_m(zeta);
}

namespace {

struct FreeWave {
  cplx u, ux;
};

// u and du/dx; du/dx = ik u - exp(i x^2/4Dt) / sqrt(4 pi i D t)
FreeWave free_cutoff_wave_with_slope(double x, double t, double k, double D) {
  const cplx u = free_cutoff_wave(x, t, k, D);
  const long double ph = static_cast<long double>(x) * x / (4.0L * D * t);
  const double phase = static_cast<double>(std::fmod(ph, 2.0L * std::numbers::pi_v<long double>));
  const cplx root = std::polar(2.0 * std::sqrt(std::numbers::pi * D * t), std::numbers::pi / 4.0);
  return {u, kI * k * u - std::polar(1.0, phase) / root};
}

// quintic smoothstep on [0, 1] with first and second derivatives
struct Ramp {
  double s, ds, d2s;
};

Ramp smoothstep(double u) {
  if (u <= 0.0) return {0.0, 0.0, 0.0};
  if (u >= 1.0) return {1.0, 0.0, 0.0};
  return {u * u * u * (10.0 + u * (-15.0 + 6.0 * u)), 30.0 * u * u * (1.0 - u) * (1.0 - u),
          60.0 * u * (1.0 - u) * (1.0 - 2.0 * u)};
}

}  // namespace

OracleReport evolve_cutoff_plane_wave(double k, const OracleGrid& g, Structure s, const std::vector<ProbePoint>& probes,
                                      double ramp_width, double layer_width) {
  if (g.potential.size() != g.nx) throw DomainError("potential profile does not match the oracle grid");
  const double D = kConstants.hbar_sq_over_me / (2.0 * g.mass_ratio) / kConstants.hbar;
  const double c = kConstants.hbar_sq_over_me / (2.0 * g.mass_ratio);
  const double hbar = kConstants.hbar;

  // the potential is V on (0, L) (L infinite for the step)
  double V = 0.0;
  double L = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.nx; ++i)
    if (g.potential[i] != 0.0) {
      V = g.potential[i];
      break;
    }
  if (s == Structure::shutter) {
    double last = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i)
      if (g.potential[i] != 0.0) last = g.x(i);
    L = last + 0.5 * g.dx();
  }
  const double l = ramp_width;
  if (!(l > 0.0) || (s == Structure::shutter && 2.0 * l > L)) throw DomainError("invalid ramp width for the oracle split");
  const double force_hi = s == Structure::shutter ? L : l;

  // quadratic absorbing layers for the remainder next to both walls
  const double lo = g.x_min + layer_width;
  const double hi = g.x_max - layer_width;
  if (!(layer_width >= 0.0) || !(lo < 0.0) || !(hi > force_hi)) throw DomainError("absorbing layers overlap the sourced region");
  std::vector<double> absorber(g.nx, 0.0);
  if (layer_width > 0.0)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double x = g.x(i);
      const double d = std::max(lo - x, x - hi) / layer_width;
      if (d > 0.0) absorber[i] = kLayerStrength * d * d;
    }

  for (const ProbePoint& p : probes) {
    check_probe(g, p, true);
    const double reach = g.signal_speed * p.t;
    // remainder is sourced on [0, force_hi]; echoes off the layers must not return
    if (!(p.x - 2.0 * lo > reach && 2.0 * hi - force_hi - p.x > reach) || p.x <= lo || p.x >= hi) {
      std::ostringstream os;
      os << "probe (x=" << p.x << " nm, t=" << p.t << " fs) lies outside the reflection-free region of the oracle grid";
      throw DomainTruncationError(os.str());
    }
  }

  // s(x): 0 left of the barrier, 1 in its interior, smooth over width l at each edge
  auto ramp = [&](double x) {
    Ramp r = smoothstep(x / l);
    r.ds /= l;
    r.d2s /= l * l;
    if (s == Structure::shutter && x > L - l) {
      const Ramp q = smoothstep((L - x) / l);
      r = {q.s, -q.ds / l, q.d2s / (l * l)};
    }
    return r;
  };
  auto reference = [&](double x, double t) {
    FreeWave w = free_cutoff_wave_with_slope(x, t, k, D);
    if (s == Structure::shutter) {
      const FreeWave m = free_cutoff_wave_with_slope(x, t, -k, D);
      w.u -= m.u;
      w.ux -= m.ux;
    }
    return w;
  };
  auto shifted = [&](double x, double t) {
    const Ramp r = ramp(x);
    return reference(x, t).u * std::polar(1.0, -V * t * r.s / hbar);
  };

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < g.nx; ++i) {
    const double x = g.x(i);
    if (x > 0.0 && x < force_hi) active.push_back(i);
  }
  // source of the remainder: (H - i hbar d/dt) applied to the shifted free wave
  auto forcing = [&](double t, std::vector<cplx>& out) {
    for (std::size_t i : active) {
      const double x = g.x(i);
      if (t == 0.0) {
        out[i] = 0.0;
        continue;
      }
      const Ramp r = ramp(x);
      const FreeWave w = reference(x, t);
      const double a = V * t / hbar;
      const double p1 = a * r.ds, p2 = a * r.d2s;
      const cplx body = (g.potential[i] - V * r.s) * w.u + c * (2.0 * kI * p1 * w.ux + kI * p2 * w.u + p1 * p1 * w.u);
      out[i] = std::polar(1.0, -a * r.s) * body;
    }
  };

  std::vector<std::size_t> order(probes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return probes[a].t < probes[b].t; });

  OracleReport rep;
  rep.amplitudes.resize(probes.size());
  std::vector<cplx> r(g.nx, 0.0), work(g.nx), f_old(g.nx, 0.0), f_new(g.nx, 0.0), f_mid(g.nx, 0.0);
  double t = 0.0;
  forcing(0.0, f_old);
  std::map<double, Factor> factors;
  for (std::size_t idx : order) {
    const double target = probes[idx].t;
    if (target > t) {
      const double gap = target - t;
      const auto n = static_cast<std::size_t>(std::ceil(gap / g.dt * (1.0 - 1e-12)));
      const double h = gap / static_cast<double>(n);
      auto it = factors.find(h);
      if (it == factors.end()) it = factors.emplace(h, factorize(g, h, absorber)).first;
      for (std::size_t st = 0; st < n; ++st) {
        const double t_new = (st + 1 == n) ? target : t + h;
        forcing(t_new, f_new);
        for (std::size_t i : active) f_mid[i] = 0.5 * (f_old[i] + f_new[i]);
        step(r, work, g, it->second, h, &f_mid, absorber);
        std::swap(f_old, f_new);
        t = t_new;
        ++rep.steps;
      }
      for (const cplx& v : r)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericalError("oracle remainder diverged");
    }
    const double x = probes[idx].x;
    cplx ref;
    if (target > 0.0) {
      ref = shifted(x, target);
    } else {
      ref = free_cutoff_wave(x, 0.0, k, D);
      if (s == Structure::shutter) ref -= free_cutoff_wave(x, 0.0, -k, D);
    }
    rep.amplitudes[idx] = interpolate(r, g, x) + ref;
  }
  return rep;
}

double relative_l2_density_error(const std::vector<double>& model, const std::vector<double>& oracle) {
  if (model.size() != oracle.size() || model.empty()) throw DomainError("density samples must match in size");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    num += (model[i] - oracle[i]) * (model[i] - oracle[i]);
    den += oracle[i] * oracle[i];
  }
  if (!(den > 0.0)) throw DomainError("oracle density vanishes identically");
  return std::sqrt(num / den);
}

}  // namespace forerunner
