#include "forerunner/forerunner.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "forerunner/analysis.hpp"
#include "forerunner/errors.hpp"
#include "forerunner/oracle.hpp"
#include "forerunner/shutter.hpp"
#include "forerunner/source.hpp"
#include "forerunner/step.hpp"

using namespace forerunner;

struct frn_model {
  frn_model_kind kind;
  std::shared_ptr<const WaveModel> model;
  std::shared_ptr<const ShutterSolution> shutter;  // shutter only
};

namespace {

thread_local std::string g_last_error;

frn_status fail(frn_status s, const std::string& what) {
  g_last_error = what;
  return s;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
frn_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FRN_OK;
  } catch (const Error& e) {
    return fail(static_cast<frn_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FRN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FRN_ERR_INTERNAL, e.what());
  }
}

#define FRN_REQUIRE(ptr)                                                     \
  do {                                                                       \
    if ((ptr) == nullptr) return fail(FRN_ERR_INVALID_ARGUMENT, #ptr " is null"); \
  } while (0)

MediumParams to_params(const frn_params& p) {
  MediumParams m = MediumParams::with_energy(p.V, p.E0, p.mass_ratio);
  if (p.L > 0.0) m.L = p.L;
  validate(m);
  return m;
}

void put(cplx z, double out[2]) {
  out[0] = z.real();
  out[1] = z.imag();
}

frn_peak to_c(const PeakRecord& r) {
  frn_peak o{};
  o.x = r.x;
  o.t_p = r.t_p;
  o.density = r.density;
  o.has_omega = r.omega_av ? 1 : 0;
  o.omega_av = r.omega_av ? *r.omega_av : std::nan("");
  return o;
}

PeakRecord from_c(const frn_peak& r) {
  PeakRecord o;
  o.x = r.x;
  o.t_p = r.t_p;
  o.density = r.density;
  if (r.has_omega) o.omega_av = r.omega_av;
  return o;
}

std::vector<PeakRecord> from_c(const frn_peak* c, size_t n) {
  std::vector<PeakRecord> v;
  v.reserve(n);
  for (size_t i = 0; i < n; ++i) v.push_back(from_c(c[i]));
  return v;
}

void split(const frn_peak_options* o, WindowPolicy& pol, PeakOptions& po) {
  frn_peak_options d;
  frn_peak_options_default(&d);
  const frn_peak_options& s = o ? *o : d;
  po.coarse_points = s.coarse_points;
  po.refine_tol = s.refine_tol;
  po.prominence = s.prominence;
  pol.span_in_gap_times = s.span_in_gap_times;
  pol.widen_factor = s.widen_factor;
  pol.max_widenings = s.max_widenings;
}

ResonancePole to_pole(const frn_pole& p) {
  ResonancePole r;
  r.n = p.n;
  r.k = {p.re, p.im};
  r.residual = p.residual;
  return r;
}

}  // namespace

extern "C" {

const char* frn_version(void) { return "0.1.0"; }

const char* frn_last_error(void) { return g_last_error.c_str(); }

const char* frn_status_name(frn_status s) {
  switch (s) {
    case FRN_OK: return "ok";
    case FRN_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case FRN_ERR_INTERNAL: return "internal";
    default: break;
  }
  const int c = static_cast<int>(s);
  if (c >= 1 && c <= 16) return error_code_name(static_cast<ErrorCode>(c));
  return "unknown";
}

void frn_params_default(frn_params* p) {
  if (!p) return;
  *p = frn_params{0.067, 0.0, 0.0, 0.0};
}

void frn_step_options_default(frn_step_options* o) {
  if (!o) return;
  const QuadratureSpec q;
  *o = frn_step_options{q.rel_tol, q.floor_fraction, q.max_panels, q.cut_scale};
}

void frn_shutter_options_default(frn_shutter_options* o) {
  if (!o) return;
  *o = frn_shutter_options{0, 1e-8, 1e-6};
}

void frn_peak_options_default(frn_peak_options* o) {
  if (!o) return;
  const PeakOptions po;
  const WindowPolicy pol;
  *o = frn_peak_options{po.coarse_points, po.refine_tol, po.prominence,
                        pol.span_in_gap_times, pol.widen_factor, pol.max_widenings};
}

frn_status frn_derive_scales(const frn_params* p, frn_scales* out) {
  FRN_REQUIRE(p);
  FRN_REQUIRE(out);
  return guarded([&] {
    const DerivedScales s = derive_scales(to_params(*p));
    *out = frn_scales{s.k, s.kappa0, s.v_sc, s.omega0, s.omegaV, s.penetration_length};
  });
}

frn_status frn_opacity(const frn_params* p, double* out) {
  FRN_REQUIRE(p);
  FRN_REQUIRE(out);
  return guarded([&] { *out = opacity(to_params(*p)); });
}

frn_status frn_source_create(const frn_params* p, frn_model** out) {
  FRN_REQUIRE(p);
  FRN_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto m = std::make_unique<frn_model>();
    m->kind = FRN_SOURCE;
    m->model = std::make_shared<SourceModel>(to_params(*p));
    *out = m.release();
  });
}

frn_status frn_shutter_create(const frn_params* p, const frn_shutter_options* o, frn_model** out) {
  FRN_REQUIRE(p);
  FRN_REQUIRE(out);
  *out = nullptr;
  frn_shutter_options opt;
  frn_shutter_options_default(&opt);
  if (o) opt = *o;
  if (opt.n_poles < 0) return fail(FRN_ERR_INVALID_ARGUMENT, "n_poles must be >= 0");
  return guarded([&] {
    const MediumParams mp = to_params(*p);
    mp.length();
    auto sol = std::make_shared<const ShutterSolution>(
        opt.n_poles == 0 ? ShutterSolution::converged(mp, opt.converge_tol) : ShutterSolution(mp, opt.n_poles));
    auto m = std::make_unique<frn_model>();
    m->kind = FRN_SHUTTER;
    m->shutter = sol;
    m->model = std::make_shared<ShutterModel>(sol, opt.rel_tol);
    *out = m.release();
  });
}

frn_status frn_step_create(const frn_params* p, const frn_step_options* o, frn_model** out) {
  FRN_REQUIRE(p);
  FRN_REQUIRE(out);
  *out = nullptr;
  frn_step_options opt;
  frn_step_options_default(&opt);
  if (o) opt = *o;
  return guarded([&] {
    QuadratureSpec q;
    q.rel_tol = opt.rel_tol;
    q.floor_fraction = opt.floor_fraction;
    q.max_panels = opt.max_panels;
    q.cut_scale = opt.cut_scale;
    auto m = std::make_unique<frn_model>();
    m->kind = FRN_STEP;
    m->model = std::make_shared<StepModel>(to_params(*p), q);
    *out = m.release();
  });
}

void frn_model_free(frn_model* m) { delete m; }

frn_status frn_model_kind_of(const frn_model* m, frn_model_kind* out) {
  FRN_REQUIRE(m);
  FRN_REQUIRE(out);
  *out = m->kind;
  return FRN_OK;
}

frn_status frn_model_pole_count(const frn_model* m, int* out) {
  FRN_REQUIRE(m);
  FRN_REQUIRE(out);
  if (!m->shutter) return fail(FRN_ERR_MISSING_DEPENDENCY, "model has no pole table");
  *out = m->shutter->N();
  return FRN_OK;
}

frn_status frn_earliest_time(const frn_model* m, double x, double* out) {
  FRN_REQUIRE(m);
  FRN_REQUIRE(out);
  return guarded([&] { *out = m->model->earliest_time(x); });
}

frn_status frn_psi(const frn_model* m, double x, double t, double out[2]) {
  FRN_REQUIRE(m);
  FRN_REQUIRE(out);
  return guarded([&] { put(m->model->psi(x, t), out); });
}

frn_status frn_dpsi_dt(const frn_model* m, double x, double t, double out[2]) {
  FRN_REQUIRE(m);
  FRN_REQUIRE(out);
  return guarded([&] {
    const std::optional<cplx> d = m->model->dpsi_dt(x, t);
    if (!d) throw MissingDependencyError("model has no analytic time derivative");
    put(*d, out);
  });
}

frn_status frn_stationary_density(const frn_model* m, double x, double* out) {
  FRN_REQUIRE(m);
  FRN_REQUIRE(out);
  return guarded([&] {
    const MediumParams& p = m->model->params();
    switch (m->kind) {
      case FRN_SOURCE:
        *out = std::exp(-2.0 * derive_scales(p).kappa0 * x);
        break;
      case FRN_SHUTTER:
        *out = std::norm(phi_stationary(m->shutter->k(), x, p));
        break;
      case FRN_STEP:
        *out = std::norm(psi_step_stationary(x, 0.0, p));
        break;
    }
  });
}

frn_status frn_source_terms(const frn_params* p, double x, double t, double pole[2], double saddle[2]) {
  FRN_REQUIRE(p);
  FRN_REQUIRE(pole);
  FRN_REQUIRE(saddle);
  return guarded([&] {
    const MediumParams mp = to_params(*p);
    put(psi_pole(x, t, mp), pole);
    put(psi_saddle(x, t, mp), saddle);
  });
}

frn_status frn_omega_saddle(const frn_params* p, double x, double t, double* out) {
  FRN_REQUIRE(p);
  FRN_REQUIRE(out);
  return guarded([&] { *out = omega_saddle(x, t, to_params(*p)); });
}

frn_status frn_omega_av(const frn_model* m, double x, double t, double* out) {
  FRN_REQUIRE(m);
  FRN_REQUIRE(out);
  return guarded([&] { *out = omega_av(*m->model->at(x), t); });
}

frn_status frn_find_peak(const frn_model* m, double x, const frn_peak_options* o, frn_peak* out) {
  FRN_REQUIRE(m);
  FRN_REQUIRE(out);
  return guarded([&] {
    WindowPolicy pol;
    PeakOptions po;
    split(o, pol, po);
    *out = to_c(find_peak(*m->model, x, pol, po));
  });
}

frn_status frn_basin_scan(const frn_model* m, const double* xs, size_t n, const frn_peak_options* o, frn_peak* curve,
                          frn_peak* minimum, int* interior_minimum, double* tail_slope) {
  FRN_REQUIRE(m);
  FRN_REQUIRE(xs);
  FRN_REQUIRE(curve);
  FRN_REQUIRE(minimum);
  return guarded([&] {
    WindowPolicy pol;
    PeakOptions po;
    split(o, pol, po);
    const BasinScan b = basin_scan(*m->model, std::vector<double>(xs, xs + n), pol, po);
    for (size_t i = 0; i < n; ++i) curve[i] = to_c(b.curve[i]);
    *minimum = to_c(b.minimum);
    if (interior_minimum) *interior_minimum = b.interior_minimum ? 1 : 0;
    if (tail_slope) *tail_slope = b.tail_slope;
  });
}

frn_status frn_slope_over(const frn_peak* curve, size_t n, double lo, double hi, double* out) {
  FRN_REQUIRE(curve);
  FRN_REQUIRE(out);
  return guarded([&] { *out = slope_over(from_c(curve, n), lo, hi); });
}

frn_status frn_frequency_crossover(const frn_peak* curve, size_t n, double omega, double* x, int* found) {
  FRN_REQUIRE(curve);
  FRN_REQUIRE(x);
  FRN_REQUIRE(found);
  return guarded([&] {
    const std::optional<double> c = frequency_crossover(from_c(curve, n), omega);
    *found = c ? 1 : 0;
    *x = c ? *c : std::nan("");
  });
}

frn_status frn_fit_tp(const double* E0, const double* t_p_min, size_t n, double V, frn_fit* out) {
  FRN_REQUIRE(E0);
  FRN_REQUIRE(t_p_min);
  FRN_REQUIRE(out);
  return guarded([&] {
    std::vector<GapRecord> r;
    for (size_t i = 0; i < n; ++i) r.push_back({E0[i], t_p_min[i]});
    const LinearFit f = fit_tp_vs_inverse_gap(r, V);
    *out = frn_fit{f.slope, f.intercept, f.r_squared};
  });
}

frn_status frn_find_poles(const frn_params* p, int N, frn_pole* out) {
  FRN_REQUIRE(p);
  FRN_REQUIRE(out);
  return guarded([&] {
    const std::vector<ResonancePole> poles = find_poles(to_params(*p), N);
    for (size_t i = 0; i < poles.size(); ++i)
      out[i] = frn_pole{poles[i].n, poles[i].k.real(), poles[i].k.imag(), poles[i].residual};
  });
}

frn_status frn_pole_energy(const frn_params* p, const frn_pole* pole, double* out) {
  FRN_REQUIRE(p);
  FRN_REQUIRE(pole);
  FRN_REQUIRE(out);
  return guarded([&] { *out = pole_energy(to_pole(*pole), to_params(*p)); });
}

frn_status frn_reference_timescales(const frn_params* p, double length, const frn_pole* first_pole,
                                    frn_timescales* out) {
  FRN_REQUIRE(p);
  FRN_REQUIRE(out);
  return guarded([&] {
    std::optional<ResonancePole> pole;
    if (first_pole) pole = to_pole(*first_pole);
    const TimeScales ts = reference_timescales(to_params(*p), length, pole);
    *out = frn_timescales{ts.bl_time,
                          ts.tp_opaque,
                          ts.tp_basin.value_or(std::nan("")),
                          ts.tp_linear.value_or(std::nan("")),
                          ts.phase_time_asymptote,
                          pole ? 1 : 0};
  });
}

frn_status frn_transition_time(const frn_params* p, double x, double* out) {
  FRN_REQUIRE(p);
  FRN_REQUIRE(out);
  return guarded([&] { *out = transition_time(x, to_params(*p)); });
}

frn_status frn_oracle_density(const frn_params* p, frn_model_kind structure, double dx, double dt, const double* xs,
                              const double* ts, size_t n, double* density, frn_oracle_stats* stats) {
  FRN_REQUIRE(p);
  FRN_REQUIRE(xs);
  FRN_REQUIRE(ts);
  FRN_REQUIRE(density);
  if (structure != FRN_SHUTTER && structure != FRN_STEP)
    return fail(FRN_ERR_INVALID_ARGUMENT, "oracle structure must be shutter or step");
  if (n == 0) return fail(FRN_ERR_INVALID_ARGUMENT, "no probes");
  return guarded([&] {
    const MediumParams mp = to_params(*p);
    const Structure s = structure == FRN_SHUTTER ? Structure::shutter : Structure::step;
    std::vector<ProbePoint> probes;
    double t_max = 0.0, x_max = 0.0;
    for (size_t i = 0; i < n; ++i) {
      probes.push_back({xs[i], ts[i]});
      t_max = std::max(t_max, ts[i]);
      x_max = std::max(x_max, xs[i]);
    }
    const OracleGrid g = barrier_grid(mp, s, dx, dt, t_max, x_max);
    const OracleReport rep = evolve_cutoff_plane_wave(derive_scales(mp).k, g, s, probes);
    for (size_t i = 0; i < n; ++i) density[i] = std::norm(rep.amplitudes[i]);
    if (stats) *stats = frn_oracle_stats{g.nx, rep.steps, g.x_min, g.x_max};
  });
}

frn_status frn_relative_l2(const double* model, const double* oracle, size_t n, double* out) {
  FRN_REQUIRE(model);
  FRN_REQUIRE(oracle);
  FRN_REQUIRE(out);
  return guarded([&] {
    *out = relative_l2_density_error(std::vector<double>(model, model + n), std::vector<double>(oracle, oracle + n));
  });
}

}  // extern "C"
