// forerunner command line: one CSV per invocation, '#' header echoing the
// resolved configuration. Links only the C interface.

#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "forerunner/forerunner.h"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;

struct Failure {
  int code;
  std::string what;
};

void check(frn_status s, const char* where) {
  if (s != FRN_OK) throw Failure{static_cast<int>(s), std::string(where) + ": " + frn_status_name(s) + ": " + frn_last_error()};
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Config {
  std::string model = "shutter";
  double V = 1.0;
  double E0 = NAN;
  double E0_frac = NAN;
  // used when neither --E0 nor --E0-frac is given
  double default_E0_frac = NAN;
  double L = 40.0;
  double mass_ratio = 0.067;
  double x = 1.0;
  std::vector<double> x_list;
  double x_min = 0.0;
  double x_max = 0.0;  // 0: derived from the penetration length
  int nx = 24;
  double t_min = 0.0;  // 0: model's earliest reliable time
  double t_max = 10.0;
  int nt = 400;
  std::vector<double> times;
  std::vector<double> E0_list;
  int poles_N = 0;
  double tol_series = 1e-6;
  double tol_poles = 1e-8;
  double tol_quad = 1e-9;
  double tol_peak = 1e-6;
  double tol_prominence = 1e-3;
  double dx = 0.01;
  double dt = 0.002;
  std::string out;
};

class Session {
 public:
  explicit Session(const Config& c) : c_(c) {}
  ~Session() {
    if (model_) frn_model_free(model_);
  }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  frn_params params(double E0) const {
    frn_params p;
    frn_params_default(&p);
    p.mass_ratio = c_.mass_ratio;
    p.V = c_.V;
    p.E0 = E0;
    p.L = c_.model == "shutter" ? c_.L : 0.0;
    return p;
  }

  double E0() const {
    if (!std::isnan(c_.E0)) return c_.E0;
    if (!std::isnan(c_.E0_frac)) return c_.E0_frac * c_.V;
    if (!std::isnan(c_.default_E0_frac)) return c_.default_E0_frac * c_.V;
    throw Failure{kExitUsage, "one of --E0 or --E0-frac is required"};
  }

  frn_model* model(const std::string& kind, const frn_params& p) {
    if (model_) frn_model_free(model_);
    model_ = nullptr;
    if (kind == "source") {
      check(frn_source_create(&p, &model_), "source model");
    } else if (kind == "shutter") {
      frn_shutter_options o;
      frn_shutter_options_default(&o);
      o.n_poles = c_.poles_N;
      o.converge_tol = c_.tol_poles;
      o.rel_tol = c_.tol_series;
      check(frn_shutter_create(&p, &o, &model_), "shutter model");
    } else {
      frn_step_options o;
      frn_step_options_default(&o);
      o.rel_tol = c_.tol_quad;
      check(frn_step_create(&p, &o, &model_), "step model");
    }
    return model_;
  }

  frn_peak_options peak_options() const {
    frn_peak_options o;
    frn_peak_options_default(&o);
    o.refine_tol = c_.tol_peak;
    o.prominence = c_.tol_prominence;
    return o;
  }

 private:
  const Config& c_;
  frn_model* model_ = nullptr;
};

frn_scales scales(const frn_params& p) {
  frn_scales s;
  check(frn_derive_scales(&p, &s), "derived scales");
  return s;
}

std::vector<double> x_grid(const Config& c, const frn_scales& s, double default_span) {
  const double hi = c.x_max > 0.0 ? c.x_max : default_span / s.kappa0;
  if (c.nx < 2) throw Failure{kExitUsage, "--nx must be at least 2"};
  std::vector<double> xs;
  if (c.x_min > 0.0) {
    for (int i = 0; i < c.nx; ++i) xs.push_back(c.x_min + (hi - c.x_min) * i / (c.nx - 1));
  } else {
    for (int i = 1; i <= c.nx; ++i) xs.push_back(hi * i / c.nx);
  }
  return xs;
}

std::vector<double> t_grid(const Config& c, double lo) {
  if (c.nt < 1) throw Failure{kExitUsage, "--nt must be positive"};
  if (!(c.t_max > lo)) throw Failure{kExitUsage, "--t-max must exceed the first reliable time"};
  std::vector<double> ts;
  for (int i = 1; i <= c.nt; ++i) ts.push_back(lo + (c.t_max - lo) * i / c.nt);
  return ts;
}

double earliest(frn_model* m, const std::vector<double>& xs) {
  double t = 0.0;
  for (double x : xs) {
    double e;
    check(frn_earliest_time(m, x, &e), "earliest time");
    t = std::max(t, e);
  }
  return t;
}

std::string omega_cell(frn_model* m, double x, double t, double omegaV) {
  double w;
  const frn_status s = frn_omega_av(m, x, t, &w);
  if (s == FRN_ERR_UNDEFINED_FREQUENCY) return "undefined";
  check(s, "omega_av");
  return num(w / omegaV);
}

std::string peak_omega(const frn_peak& r, double omegaV) {
  return r.has_omega ? num(r.omega_av / omegaV) : std::string("undefined");
}

double density(frn_model* m, double x, double t) {
  double z[2];
  check(frn_psi(m, x, t, z), "psi");
  return z[0] * z[0] + z[1] * z[1];
}

void scales_block(std::ostream& os, const frn_params& p, const frn_scales& s) {
  os << "# hbar = 0.6582119569 eV fs\n# hbar^2/m_e = 0.0761996 eV nm^2\n";
  os << "# E0 = " << exact(p.E0) << " eV\n";
  os << "# k = " << exact(s.k) << " 1/nm\n# kappa0 = " << exact(s.kappa0) << " 1/nm\n";
  os << "# v_sc = " << exact(s.v_sc) << " nm/fs\n# omega0 = " << exact(s.omega0) << " 1/fs\n";
  os << "# omegaV = " << exact(s.omegaV) << " 1/fs\n";
}

using Runner = std::function<void(std::ostream&, Session&, const Config&)>;

void source_density(std::ostream& os, Session& ses, const Config& c) {
  const frn_params p = ses.params(ses.E0());
  const frn_scales s = scales(p);
  frn_model* m = ses.model("source", p);
  scales_block(os, p, s);
  os << "t,density,pole_density,saddle_density,pole_plus_saddle_density\n";
  for (double t : t_grid(c, c.t_min)) {
    double pole[2], saddle[2];
    check(frn_source_terms(&p, c.x, t, pole, saddle), "source terms");
    const double sr = pole[0] + saddle[0], si = pole[1] + saddle[1];
    os << num(t) << ',' << num(density(m, c.x, t)) << ',' << num(pole[0] * pole[0] + pole[1] * pole[1]) << ','
       << num(saddle[0] * saddle[0] + saddle[1] * saddle[1]) << ',' << num(sr * sr + si * si) << '\n';
  }
}

void frequency_trace(std::ostream& os, Session& ses, const Config& c) {
  const frn_params p = ses.params(ses.E0());
  const frn_scales s = scales(p);
  frn_model* m = ses.model(c.model, p);
  scales_block(os, p, s);
  const double lo = c.t_min > 0.0 ? c.t_min : earliest(m, {c.x});
  os << "t,omega_av_over_omegaV,omega0_over_omegaV,omega_s_over_omegaV,density\n";
  for (double t : t_grid(c, lo)) {
    double ws;
    check(frn_omega_saddle(&p, c.x, t, &ws), "omega_s");
    os << num(t) << ',' << omega_cell(m, c.x, t, s.omegaV) << ',' << num(s.omega0 / s.omegaV) << ','
       << num(ws / s.omegaV) << ',' << num(density(m, c.x, t)) << '\n';
  }
}

void peak_rows(std::ostream& os, const frn_params& p, const frn_scales& s, const std::vector<frn_peak>& curve) {
  os << "x,x_kappa0,t_p,density,omega_av_over_omegaV,bl_time\n";
  for (const frn_peak& r : curve) {
    frn_timescales ts;
    check(frn_reference_timescales(&p, r.x, nullptr, &ts), "time scales");
    os << num(r.x) << ',' << num(r.x * s.kappa0) << ',' << num(r.t_p) << ',' << num(r.density) << ','
       << peak_omega(r, s.omegaV) << ',' << num(ts.bl_time) << '\n';
  }
}

void peak_map(std::ostream& os, Session& ses, const Config& c) {
  const frn_params p = ses.params(ses.E0());
  const frn_scales s = scales(p);
  frn_model* m = ses.model(c.model, p);
  scales_block(os, p, s);
  const frn_peak_options o = ses.peak_options();
  std::vector<frn_peak> curve;
  for (double x : x_grid(c, s, 4.0)) {
    frn_peak r;
    check(frn_find_peak(m, x, &o, &r), "peak search");
    curve.push_back(r);
  }
  peak_rows(os, p, s, curve);
}

struct BasinResult {
  std::vector<frn_peak> curve;
  frn_peak minimum;
  int interior = 0;
  double tail = 0.0;
};

BasinResult run_basin(Session& ses, const Config& c, const std::string& kind, const frn_params& p,
                      const frn_scales& s) {
  frn_model* m = ses.model(kind, p);
  const std::vector<double> xs = x_grid(c, s, 4.0);
  const frn_peak_options o = ses.peak_options();
  BasinResult b;
  b.curve.resize(xs.size());
  check(frn_basin_scan(m, xs.data(), xs.size(), &o, b.curve.data(), &b.minimum, &b.interior, &b.tail), "basin scan");
  return b;
}

void basin_for(std::ostream& os, Session& ses, const Config& c, const std::string& kind) {
  const frn_params p = ses.params(ses.E0());
  const frn_scales s = scales(p);
  scales_block(os, p, s);
  const BasinResult b = run_basin(ses, c, kind, p, s);
  peak_rows(os, p, s, b.curve);
  os << "# minimum_x = " << num(b.minimum.x) << "\n# minimum_x_kappa0 = " << num(b.minimum.x * s.kappa0) << '\n';
  os << "# minimum_t_p = " << num(b.minimum.t_p) << "\n# interior_minimum = " << b.interior << '\n';
  double xc;
  int found;
  check(frn_frequency_crossover(b.curve.data(), b.curve.size(), s.omegaV, &xc, &found), "crossover");
  os << "# crossover_x = " << (found ? num(xc) : std::string("none")) << '\n';
  os << "# tail_slope = " << num(b.tail) << " fs/nm\n";
}

void basin(std::ostream& os, Session& ses, const Config& c) { basin_for(os, ses, c, c.model); }
void step_basin(std::ostream& os, Session& ses, const Config& c) { basin_for(os, ses, c, "step"); }

void fit_tp(std::ostream& os, Session& ses, const Config& c) {
  if (c.E0_list.empty()) throw Failure{kExitUsage, "--E0-list is required"};
  os << "E0,inverse_gap,x_min,t_p_min\n";
  std::vector<double> tp;
  for (double E0 : c.E0_list) {
    const frn_params p = ses.params(E0);
    const frn_scales s = scales(p);
    const BasinResult b = run_basin(ses, c, c.model, p, s);
    tp.push_back(b.minimum.t_p);
    os << num(E0) << ',' << num(1.0 / (c.V - E0)) << ',' << num(b.minimum.x) << ',' << num(b.minimum.t_p) << '\n';
  }
  frn_fit f;
  check(frn_fit_tp(c.E0_list.data(), tp.data(), tp.size(), c.V, &f), "fit");
  os << "# slope = " << num(f.slope) << " fs eV\n# intercept = " << num(f.intercept) << " fs\n";
  os << "# r_squared = " << num(f.r_squared) << "\n# hbar_pi = " << num(0.6582119569 * M_PI) << " fs eV\n";
}

void shutter_snapshots(std::ostream& os, Session& ses, const Config& c) {
  const frn_params p = ses.params(ses.E0());
  const frn_scales s = scales(p);
  frn_model* m = ses.model("shutter", p);
  scales_block(os, p, s);
  const std::vector<double> times = c.times.empty() ? std::vector<double>{1.0, 2.0, 4.0} : c.times;
  std::vector<double> xs;
  const double hi = c.x_max > 0.0 ? c.x_max : 4.0;
  for (int i = 0; i < c.nx; ++i) xs.push_back(c.x_min + (hi - c.x_min) * i / (c.nx - 1));
  os << "x,stationary_density";
  for (double t : times) os << ",density_t" << exact(t);
  os << '\n';
  for (double x : xs) {
    double st;
    check(frn_stationary_density(m, x, &st), "stationary density");
    os << num(x) << ',' << num(st);
    for (double t : times) os << ',' << num(density(m, x, t));
    os << '\n';
  }
}

void shutter_density(std::ostream& os, Session& ses, const Config& c) {
  const frn_params p = ses.params(ses.E0());
  const frn_scales s = scales(p);
  frn_model* m = ses.model("shutter", p);
  scales_block(os, p, s);
  const std::vector<double> xs = c.x_list.empty() ? std::vector<double>{0.5, 0.7, 1.0, 2.0} : c.x_list;
  const double lo = c.t_min > 0.0 ? c.t_min : earliest(m, xs);
  os << "t";
  for (double x : xs) os << ",density_x" << exact(x);
  os << '\n';
  for (double t : t_grid(c, lo)) {
    os << num(t);
    for (double x : xs) os << ',' << num(density(m, x, t));
    os << '\n';
  }
}

void poles(std::ostream& os, Session& ses, const Config& c) {
  const frn_params p = ses.params(ses.E0());
  if (c.poles_N < 1) throw Failure{kExitUsage, "--poles-N must be positive"};
  std::vector<frn_pole> table(static_cast<size_t>(c.poles_N));
  check(frn_find_poles(&p, c.poles_N, table.data()), "pole search");
  double alpha;
  check(frn_opacity(&p, &alpha), "opacity");
  os << "# opacity = " << exact(alpha) << '\n';
  frn_timescales ts;
  check(frn_reference_timescales(&p, c.L, table.data(), &ts), "time scales");
  const double D = 0.5 * 0.0761996 / c.mass_ratio / 0.6582119569;
  const double v1 = 2.0 * D * table[0].re;
  os << "# v1 = " << exact(v1) << " nm/fs\n# inverse_v1 = " << exact(1.0 / v1) << " fs/nm\n";
  os << "# tp_basin = " << exact(ts.tp_basin) << " fs\n# tp_linear = " << exact(ts.tp_linear) << " fs\n";
  os << "n,a_n,b_n,energy,residual\n";
  for (const frn_pole& q : table) {
    double e;
    check(frn_pole_energy(&p, &q, &e), "pole energy");
    os << q.n << ',' << num(q.re) << ',' << num(-q.im) << ',' << num(e) << ',' << num(q.residual) << '\n';
  }
}

void step_frequency(std::ostream& os, Session& ses, const Config& c) {
  const frn_params p = ses.params(ses.E0());
  const frn_scales s = scales(p);
  frn_model* m = ses.model("step", p);
  scales_block(os, p, s);
  const frn_peak_options o = ses.peak_options();
  os << "x,x_kappa0,t_p,omega_av_over_omegaV,omega0_over_omegaV,omega_s_over_omegaV\n";
  for (double x : x_grid(c, s, 4.0)) {
    frn_peak r;
    check(frn_find_peak(m, x, &o, &r), "peak search");
    double ws;
    check(frn_omega_saddle(&p, x, r.t_p, &ws), "omega_s");
    os << num(x) << ',' << num(x * s.kappa0) << ',' << num(r.t_p) << ',' << peak_omega(r, s.omegaV) << ','
       << num(s.omega0 / s.omegaV) << ',' << num(ws / s.omegaV) << '\n';
  }
}

void oracle_compare(std::ostream& os, Session& ses, const Config& c) {
  if (c.model != "shutter" && c.model != "step") throw Failure{kExitUsage, "oracle-compare needs --model shutter or step"};
  const frn_params p = ses.params(ses.E0());
  const frn_scales s = scales(p);
  frn_model* m = ses.model(c.model, p);
  scales_block(os, p, s);
  const double hi = c.x_max > 0.0 ? c.x_max : 3.0;
  std::vector<double> xs, ts, model;
  for (int j = 0; j <= c.nt; ++j)
    for (int i = 0; i < c.nx; ++i) {
      const double x = c.x_min + (hi - c.x_min) * i / (c.nx - 1);
      const double t = c.t_max * j / c.nt;
      if (c.model == "step" && (x <= 0.0 || t <= 0.0)) continue;
      xs.push_back(x);
      ts.push_back(t);
      model.push_back(t == 0.0 ? 0.0 : density(m, x, t));
    }
  std::vector<double> oracle(xs.size());
  frn_oracle_stats st;
  check(frn_oracle_density(&p, c.model == "shutter" ? FRN_SHUTTER : FRN_STEP, c.dx, c.dt, xs.data(), ts.data(), xs.size(),
                           oracle.data(), &st),
        "oracle");
  double err;
  check(frn_relative_l2(model.data(), oracle.data(), model.size(), &err), "l2 error");
  os << "# oracle_nx = " << st.nx << "\n# oracle_steps = " << st.steps << '\n';
  os << "# oracle_x_min = " << exact(st.x_min) << "\n# oracle_x_max = " << exact(st.x_max) << '\n';
  os << "x,t,model_density,oracle_density\n";
  for (size_t i = 0; i < xs.size(); ++i)
    os << num(xs[i]) << ',' << num(ts[i]) << ',' << num(model[i]) << ',' << num(oracle[i]) << '\n';
  os << "# relative_l2_error = " << num(err) << '\n';
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

// '#' block with every option of the subcommand, explicit or default.
std::string echo(const CLI::App& sub) {
  std::ostringstream os, rerun;
  os << "# forerunner " << frn_version() << '\n';
  os << "# command = " << sub.get_name() << '\n';
  rerun << "# rerun = forerunner " << sub.get_name();
  for (const CLI::Option* o : sub.get_options()) {
    if (o->get_lnames().empty() || o->get_lnames()[0] == "help" || o->get_lnames()[0] == "out") continue;
    const std::string name = o->get_lnames()[0];
    std::string value = o->count() ? join(o->results()) : o->get_default_str();
    if (value == "nan") value.clear();
    os << "# " << name << " = " << (value.empty() ? "unset" : value) << '\n';
    if (!value.empty()) rerun << " --" << name << ' ' << value;
  }
  os << rerun.str() << '\n';
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transient tunneling forerunners: CSV data for densities, peak times, frequencies and fits"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  std::deque<Config> configs;
  std::vector<std::pair<CLI::App*, Runner>> commands;

  // defaults are the reference parameters of each computation
  auto add = [&](const char* name, const char* help, Runner r, const std::string& model, double V, double E0_frac,
                 bool with_L) -> std::pair<CLI::App*, Config*> {
    CLI::App* s = app.add_subcommand(name, help);
    Config& c = configs.emplace_back();
    c.model = model;
    c.V = V;
    c.default_E0_frac = E0_frac;
    s->add_option("--V", c.V, "barrier height (eV)");
    auto* e = s->add_option("--E0", c.E0, "incident energy (eV); default " + std::to_string(E0_frac) + " V");
    auto* f = s->add_option("--E0-frac", c.E0_frac, "incident energy as a fraction of V");
    e->excludes(f);
    if (with_L) s->add_option("--L", c.L, "barrier length (nm)");
    s->add_option("--mass-ratio", c.mass_ratio, "effective mass in units of m_e");
    s->add_option("--out", c.out, "output file (default stdout)");
    commands.emplace_back(s, std::move(r));
    return {s, &c};
  };
  auto model_opt = [](CLI::App* s, Config& c) {
    s->add_option("--model", c.model, "source, shutter or step")->check(CLI::IsMember({"source", "shutter", "step"}));
  };
  auto tolerances = [](CLI::App* s, Config& c, bool peaks) {
    s->add_option("--poles-N", c.poles_N, "shutter pole pairs (0: smallest converged power of two)");
    s->add_option("--tol-series", c.tol_series, "shutter truncation tolerance");
    s->add_option("--tol-poles", c.tol_poles, "shutter pole-count convergence tolerance");
    s->add_option("--tol-quad", c.tol_quad, "step quadrature relative tolerance");
    if (peaks) {
      s->add_option("--tol-peak", c.tol_peak, "peak time refinement tolerance");
      s->add_option("--tol-prominence", c.tol_prominence, "first-maximum relative prominence");
    }
  };
  auto x_range = [](CLI::App* s, Config& c, int nx, double x_max) {
    c.nx = nx;
    c.x_max = x_max;
    s->add_option("--x-min", c.x_min, "first position (nm); 0 starts the grid at x-max/nx");
    s->add_option("--x-max", c.x_max, "last position (nm); 0 means 4/kappa0");
    s->add_option("--nx", c.nx, "number of positions");
  };
  auto t_range = [](CLI::App* s, Config& c, double t_max, int nt) {
    c.t_max = t_max;
    c.nt = nt;
    s->add_option("--t-min", c.t_min, "first time (fs); 0 means the model's earliest reliable time");
    s->add_option("--t-max", c.t_max, "last time (fs)");
    s->add_option("--nt", c.nt, "number of times");
  };

  {
    auto [s, c] = add("source-density", "density, pole, saddle and pole+saddle densities vs t", source_density,
                      "source", 0.3, 0.907, false);
    c->x = 2.75;
    s->add_option("--x", c->x, "position (nm)");
    t_range(s, *c, 100.0, 2000);
  }
  {
    auto [s, c] = add("frequency-trace", "omega_av, omega0 and omega_s vs t at one position", frequency_trace,
                      "source", 0.3, 0.907, true);
    model_opt(s, *c);
    c->x = 2.75;
    s->add_option("--x", c->x, "position (nm)");
    t_range(s, *c, 100.0, 1000);
    tolerances(s, *c, false);
  }
  {
    auto [s, c] = add("peak-map", "first-peak time and omega_av(t_p) vs x", peak_map, "source", 0.3, 0.907, true);
    model_opt(s, *c);
    x_range(s, *c, 24, 0.0);
    tolerances(s, *c, true);
  }
  {
    auto [s, c] = add("basin", "t_p(x) basin with its minimum, crossover and tail slope", basin, "shutter", 1.0, 0.1,
                      true);
    model_opt(s, *c);
    x_range(s, *c, 24, 0.0);
    tolerances(s, *c, true);
  }
  {
    auto [s, c] = add("fit-tp", "basin-minimum t_p vs 1/(V-E0) with a linear fit", fit_tp, "step", 1.0, 0.5, true);
    model_opt(s, *c);
    s->add_option("--E0-list", c->E0_list, "incident energies (eV)")->delimiter(',')->required();
    x_range(s, *c, 24, 0.0);
    tolerances(s, *c, true);
  }
  {
    auto [s, c] = add("shutter-snapshots", "shutter density vs x at fixed times", shutter_snapshots, "shutter", 1.0,
                      0.1, true);
    c->times = {1.0, 2.0, 4.0};
    s->add_option("--times", c->times, "snapshot times (fs)")->delimiter(',');
    x_range(s, *c, 81, 4.0);
    tolerances(s, *c, false);
  }
  {
    auto [s, c] = add("shutter-density", "shutter density vs t at fixed positions", shutter_density, "shutter", 1.0,
                      0.1, true);
    c->x_list = {0.5, 0.7, 1.0, 2.0};
    s->add_option("--x", c->x_list, "positions (nm)")->delimiter(',');
    t_range(s, *c, 10.0, 400);
    tolerances(s, *c, false);
  }
  {
    auto [s, c] = add("poles", "resonance pole table of the square barrier", poles, "shutter", 1.0, 0.1, true);
    c->poles_N = 20;
    s->add_option("--poles-N", c->poles_N, "number of poles");
  }
  {
    auto [s, c] = add("step-frequency", "step model omega_av at the first peak vs x", step_frequency, "step", 1.0, 0.5,
                      false);
    x_range(s, *c, 24, 0.0);
    tolerances(s, *c, true);
  }
  {
    auto [s, c] = add("step-basin", "step model t_p(x) basin", step_basin, "step", 1.0, 0.5, false);
    x_range(s, *c, 24, 0.0);
    tolerances(s, *c, true);
  }
  {
    auto [s, c] = add("oracle-compare", "model vs Crank-Nicolson densities on an (x, t) grid", oracle_compare, "step",
                      1.0, 0.5, true);
    model_opt(s, *c);
    x_range(s, *c, 61, 3.0);
    t_range(s, *c, 10.0, 40);
    s->add_option("--dx", c->dx, "oracle grid spacing (nm)");
    s->add_option("--dt", c->dt, "oracle time step (fs)");
    tolerances(s, *c, false);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int r = app.exit(e);
    return r == 0 ? 0 : kExitUsage;
  }

  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = commands[i].first;
    if (!sub->parsed()) continue;
    const Config& c = configs[i];
    std::ostringstream os;
    try {
      Session ses(c);
      os << echo(*sub);
      commands[i].second(os, ses, c);
    } catch (const Failure& f) {
      std::cerr << "forerunner: " << f.what << '\n';
      return f.code;
    }
    if (c.out.empty()) {
      std::cout << os.str();
      return std::cout ? 0 : kExitIo;
    }
    std::ofstream f(c.out, std::ios::binary);
    f << os.str();
    if (!f) {
      std::cerr << "forerunner: cannot write " << c.out << '\n';
      return kExitIo;
    }
    return 0;
  }
  return kExitUsage;
}
