#include "forerunner/shutter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "forerunner/errors.hpp"

namespace forerunner {
namespace {

const cplx kI{0.0, 1.0};
const double kInvSqrtPi = std::numbers::inv_sqrtpi;

// cos(w) exp(-|Im w|)
cplx scaled_cos(cplx w) {
  const double b = w.imag();
  const double ab = std::abs(b);
  const cplx ep = std::polar(std::exp(-b - ab), w.real());
  const cplx em = std::polar(std::exp(b - ab), -w.real());
  return 0.5 * (ep + em);
}

// sin(q l)/q exp(-|Im(q l)|)
cplx scaled_sinc(cplx q, double l) {
  const cplx w = q * l;
  if (std::abs(w) < 1e-4) return detail::sinc_length(q, l);
  const double b = w.imag();
  const double ab = std::abs(b);
  const cplx ep = std::polar(std::exp(-b - ab), w.real());
  const cplx em = std::polar(std::exp(b - ab), -w.real());
  return (ep - em) / (2.0 * kI * q);
}

void check_inside(double x, double L) {
  if (!(x >= 0.0 && x <= L)) throw DomainError("position outside the barrier region [0, L]");
}

double barrier_k2(const MediumParams& p) { return p.V / p.hbar_sq_over_2m(); }

// ratios sinh(K(x-L))/sinh(KL), cosh(K(x-L))/sinh(KL), coth(KL) without overflow
struct HyperbolicRatios {
  double r1, r2, r3;
};

HyperbolicRatios hyperbolic_ratios(double K, double x, double L) {
  const double eL = std::exp(-2.0 * K * L);
  const double eLx = std::exp(-2.0 * K * (L - x));
  const double ex = std::exp(-K * x);
  return {-ex * (1.0 - eLx) / (1.0 - eL), ex * (1.0 + eLx) / (1.0 - eL), (1.0 + eL) / (1.0 - eL)};
}

// Per-position data for the resonance expansion.
struct Probe {
  double x = 0.0;
  cplx phi_k, phi_mk;
  cplx A1, A3;
  std::vector<cplx> rho;  // n = 1..N; rho_{-n} = -conj(rho_n)
};

Probe make_probe(double x, const ShutterSolution& sol, int N) {
  const MediumParams& p = sol.params();
  check_inside(x, p.length());
  const double k = sol.k();
  Probe pr;
  pr.x = x;
  pr.phi_k = phi_stationary(k, x, p);
  pr.phi_mk = phi_stationary(-k, x, p);
  const detail::ClosedSums c = detail::shutter_closed_sums(x, p);
  pr.A1 = c.inverse_first;
  pr.A3 = c.inverse_third;
  pr.rho.resize(N);
  for (int n = 0; n < N; ++n) pr.rho[n] = rho_factor(k, sol.poles()[n], x);
  return pr;
}

cplx scale_s(double t, const MediumParams& p) {
  return -std::polar(1.0, -std::numbers::pi / 4.0) * std::sqrt(p.hbar_over_2m() * t);
}

struct Evaluation {
  cplx value;        // truncation N
  cplx half;         // truncation N/2
  cplx derivative;
};

Evaluation evaluate(const Probe& pr, double t, const ShutterSolution& sol, bool want_derivative) {
  const cplx s = scale_s(t, sol.params());
  const double k = sol.k();
  const int N = static_cast<int>(pr.rho.size());
  const int half = N / 2;
  cplx sum = 0.0, sum_half = 0.0, dsum = 0.0;
  for (int n = 0; n < N; ++n) {
    if (n == half) sum_half = sum;
    const cplx kn = sol.poles()[n].pole().k;
    const cplx y1 = s * kn;
    const cplx y2 = -s * std::conj(kn);
    const cplx r1 = pr.rho[n];
    const cplx r2 = -std::conj(r1);
    sum += r1 * moshinsky_m_tail(y1) + r2 * moshinsky_m_tail(y2);
    if (want_derivative)
      dsum += r1 * y1 * moshinsky_m_tail_derivative(y1) + r2 * y2 * moshinsky_m_tail_derivative(y2);
  }
  if (half == 0) sum_half = 0.0;
  const cplx s3 = s * s * s;
  const cplx closed = pr.A1 * kInvSqrtPi / (2.0 * s) - pr.A3 * kInvSqrtPi / (4.0 * s3);
  const cplx lead = pr.phi_k * moshinsky_m(s * k) - pr.phi_mk * moshinsky_m(-s * k);
  Evaluation e;
  e.value = lead - (sum + closed);
  e.half = lead - (sum_half + closed);
  if (want_derivative) {
    const cplx dlead = pr.phi_k * (s * k) * moshinsky_m_derivative(s * k) -
                       pr.phi_mk * (-s * k) * moshinsky_m_derivative(-s * k);
    const cplx dclosed = -pr.A1 * kInvSqrtPi / (2.0 * s) + 3.0 * pr.A3 * kInvSqrtPi / (4.0 * s3);
    e.derivative = (dlead - dsum - dclosed) / (2.0 * t);
  }
  return e;
}

// amplitudes below kAbsoluteFloor (incident amplitude 1) carry no information
constexpr double kAbsoluteFloor = 1e-10;

double truncation_scale(const Probe& pr, const Evaluation& e) {
  return std::max({std::abs(e.value), 0.01 * std::abs(pr.phi_k), kAbsoluteFloor});
}

void check_truncation(const Probe& pr, double t, const Evaluation& e, double rel_tol) {
  const double scale = truncation_scale(pr, e);
  if (std::abs(e.value - e.half) > rel_tol * scale) {
    std::ostringstream os;
    os << "resonance sum not converged at x=" << pr.x << " nm, t=" << t << " fs with "
       << pr.rho.size() << " pole pairs (change " << std::abs(e.value - e.half) / scale << ")";
    throw ConvergenceError(os.str(), e.half, e.value);
  }
}

void check_time(double t) {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("time must satisfy t >= 0");
}

class ShutterSignal final : public TimeSignal {
 public:
  ShutterSignal(std::shared_ptr<const ShutterSolution> sol, double x, double rel_tol)
      : sol_(std::move(sol)), probe_(make_probe(x, *sol_, sol_->N())), rel_tol_(rel_tol) {}

  cplx value(double t) const override {
    check_time(t);
    if (t == 0.0) return 0.0;
    const Evaluation e = evaluate(probe_, t, *sol_, false);
    check_truncation(probe_, t, e, rel_tol_);
    return e.value;
  }

  std::optional<cplx> derivative(double t) const override {
    check_time(t);
    if (t == 0.0) throw DomainError("time derivative is not defined at switch-on");
    const Evaluation e = evaluate(probe_, t, *sol_, true);
    check_truncation(probe_, t, e, rel_tol_);
    return e.derivative;
  }

 private:
  std::shared_ptr<const ShutterSolution> sol_;
  Probe probe_;
  double rel_tol_;
};

}  // namespace

namespace detail {

ClosedSums shutter_closed_sums(double x, const MediumParams& p) {
  const double k = derive_scales(p).k;
  const cplx phi_k = phi_stationary(k, x, p);
  const cplx phi_mk = phi_stationary(-k, x, p);
  // d/dk' of the outgoing Green function G+(x, 0; k') at k' = 0
  const double K = std::sqrt(barrier_k2(p));
  const HyperbolicRatios h = hyperbolic_ratios(K, x, p.length());
  const cplx dgreen = -kI * (h.r1 + 2.0 * h.r2 * h.r3) / (K * K);
  ClosedSums c;
  c.inverse_first = (phi_k + phi_mk) / k;
  c.inverse_third = (2.0 * kI / k) * (-2.0 * dgreen) + (phi_k + phi_mk) / (k * k * k);
  return c;
}

}  // namespace detail

cplx phi_stationary(double k, double x, const MediumParams& p) {
  const double L = p.length();
  check_inside(x, L);
  if (!std::isfinite(k) || k == 0.0) throw DomainError("stationary wavenumber must be nonzero");
  const double K2 = barrier_k2(p);
  const cplx q = std::sqrt(cplx(k * k - K2, 0.0));
  const cplx num = scaled_cos(q * (x - L)) + kI * k * scaled_sinc(q, x - L);
  const cplx den = (2.0 * k * k - K2) * scaled_sinc(q, L) + 2.0 * kI * k * scaled_cos(q * L);
  const double decay = std::abs((q * (x - L)).imag()) - std::abs((q * L).imag());
  return 2.0 * kI * k * num / den * std::exp(decay);
}

ScatteringAmplitudes stationary_amplitudes(double k, const MediumParams& p) {
  const double L = p.length();
  const cplx r = phi_stationary(k, 0.0, p) - 1.0;
  const cplx t = phi_stationary(k, L, p) * std::polar(1.0, -k * L);
  return {r, t};
}

ShutterSolution::ShutterSolution(const MediumParams& p, int N)
    : ShutterSolution(p, find_poles(p, N)) {}

ShutterSolution::ShutterSolution(const MediumParams& p, std::vector<ResonancePole> poles)
    : params_(p), k_(derive_scales(p).k) {
  p.length();
  if (poles.empty()) throw DomainError("at least one pole pair is required");
  states_.reserve(poles.size());
  for (const ResonancePole& pole : poles) states_.emplace_back(pole, p);
}

double ShutterSolution::earliest_time() const {
  const cplx kN = states_.back().pole().k;
  return 15.0 / (params_.hbar_over_2m() * kN.real() * -kN.imag());
}

ShutterSolution ShutterSolution::converged(const MediumParams& p, double rel_tol, int max_poles) {
  const DerivedScales s = derive_scales(p);
  const double L = p.length();
  const double t0 = kConstants.hbar / (p.V - p.E0);
  const std::vector<double> xs = {std::min(0.5 / s.kappa0, L), std::min(1.0 / s.kappa0, L),
                                  std::min(3.0 / s.kappa0, L)};
  const std::vector<double> ts = {0.5 * t0, 2.0 * t0, 8.0 * t0};
  ShutterSolution full(p, max_poles);
  std::vector<Probe> probes;
  for (double x : xs) probes.push_back(make_probe(x, full, max_poles));
  for (int N = 64; N <= max_poles; N *= 2) {
    bool ok = true;
    for (Probe pr : probes) {
      pr.rho.resize(N);
      for (double t : ts) {
        const Evaluation e = evaluate(pr, t, full, false);
        if (std::abs(e.value - e.half) > rel_tol * truncation_scale(pr, e)) ok = false;
      }
    }
    if (ok) {
      std::vector<ResonancePole> poles;
      for (int n = 0; n < N; ++n) poles.push_back(full.poles()[n].pole());
      return ShutterSolution(p, std::move(poles));
    }
  }
  throw ConvergenceError("no truncation up to " + std::to_string(max_poles) +
                             " pole pairs met the tolerance",
                         0.0, 0.0);
}

cplx psi_internal(double x, double t, const ShutterSolution& sol, double rel_tol) {
  check_time(t);
  check_inside(x, sol.params().length());
  if (t == 0.0) return 0.0;
  const Probe pr = make_probe(x, sol, sol.N());
  const Evaluation e = evaluate(pr, t, sol, false);
  check_truncation(pr, t, e, rel_tol);
  return e.value;
}

cplx dpsi_dt_internal(double x, double t, const ShutterSolution& sol, double rel_tol) {
  check_time(t);
  if (t == 0.0) throw DomainError("time derivative is not defined at switch-on");
  const Probe pr = make_probe(x, sol, sol.N());
  const Evaluation e = evaluate(pr, t, sol, true);
  check_truncation(pr, t, e, rel_tol);
  return e.derivative;
}

cplx initial_sum_rule_defect(double x, const ShutterSolution& sol, int N) {
  if (N < 1 || N > sol.N()) throw DomainError("sum-rule truncation outside the pole table");
  const MediumParams& p = sol.params();
  const double k = sol.k();
  cplx sum = 0.0;
  for (int n = 0; n < N; ++n) {
    const cplx r = rho_factor(k, sol.poles()[n], x);
    sum += r - std::conj(r);
  }
  return phi_stationary(k, x, p) - phi_stationary(-k, x, p) - sum;
}

std::vector<std::vector<double>> density_snapshots(const std::vector<double>& times,
                                                   const std::vector<double>& xs,
                                                   const ShutterSolution& sol, double rel_tol) {
  std::vector<Probe> probes;
  probes.reserve(xs.size());
  for (double x : xs) probes.push_back(make_probe(x, sol, sol.N()));
  std::vector<std::vector<double>> out;
  for (double t : times) {
    check_time(t);
    std::vector<double> row;
    row.reserve(xs.size());
    for (const Probe& pr : probes) {
      if (t == 0.0) {
        row.push_back(0.0);
        continue;
      }
      const Evaluation e = evaluate(pr, t, sol, false);
      check_truncation(pr, t, e, rel_tol);
      row.push_back(std::norm(e.value));
    }
    out.push_back(std::move(row));
  }
  return out;
}

ShutterModel::ShutterModel(std::shared_ptr<const ShutterSolution> sol, double rel_tol)
    : sol_(std::move(sol)), rel_tol_(rel_tol) {
  if (!sol_) throw DomainError("shutter model needs a solution");
}

double ShutterModel::earliest_time(double x) const {
  // the saddle wavenumber x / (2 D t) must stay well inside the retained poles
  const double aN = sol_->poles().back().pole().k.real();
  return std::max(sol_->earliest_time(), 8.0 * x / (2.0 * sol_->params().hbar_over_2m() * aN));
}

std::unique_ptr<TimeSignal> ShutterModel::at(double x) const {
  return std::make_unique<ShutterSignal>(sol_, x, rel_tol_);
}

}  // namespace forerunner
