#include "forerunner/step.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>
#include <numbers>
#include <sstream>

#include "forerunner/errors.hpp"

namespace forerunner {
namespace {

const cplx kI{0.0, 1.0};
using Quad = boost::math::quadrature::gauss_kronrod<double, 21>;

// k'' on the physical sheet, continued across Re k' > K into the fourth quadrant.
cplx inside_wavenumber(cplx kp, double K) {
  if (kp.imag() < 0.0) return std::sqrt(kp * kp - K * K);
  if (kp.imag() == 0.0) {
    const double r = kp.real();
    if (std::abs(r) < K) return kI * std::sqrt(K * K - r * r);
    return std::copysign(std::sqrt(r * r - K * K), r);
  }
  return kI * std::sqrt(K * K - kp * kp);
}

struct Integrand {
  double x, t, D, K;
  int order;  // 0: Psi, 1: dPsi/dt

  // (i/pi) k'/(k'+k'') exp(i k'' x - i D k'^2 t) (-i D k'^2)^order
  cplx g(cplx kp) const {
    const cplx kpp = inside_wavenumber(kp, K);
    cplx v = (kI / std::numbers::pi) * kp / (kp + kpp) * std::exp(kI * kpp * x - kI * D * kp * kp * t);
    if (order == 1) v *= -kI * D * kp * kp;
    return v;
  }
};

using Piece = std::function<cplx(double)>;

struct Panel {
  double a, b;
  cplx value;
  double error;
  double l1;
  std::size_t piece;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate(const std::vector<Piece>& pieces, std::size_t i, double a, double b) {
  double err = 0.0, l1 = 0.0;
  const cplx v = Quad::integrate(pieces[i], a, b, 0, 0.0, &err, &l1);
  return {a, b, v, err, l1, i};
}

// Global adaptive bisection over all contour pieces until the summed error
// estimate drops below rel_tol * max(|sum|, floor).
struct GlobalResult {
  cplx value;
  double error;
};

GlobalResult integrate_pieces(const std::vector<Piece>& pieces, const std::vector<std::pair<double, double>>& ranges,
                              double rel_tol, double floor, std::size_t max_panels, cplx offset) {
  std::priority_queue<Panel> heap;
  cplx total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (ranges[i].second <= ranges[i].first) continue;
    Panel pn = evaluate(pieces, i, ranges[i].first, ranges[i].second);
    total += pn.value;
    error += pn.error;
    heap.push(pn);
  }
  std::size_t panels = heap.size();
  while (!heap.empty() && error > rel_tol * std::max(std::abs(total + offset), floor) && panels < max_panels) {
    Panel worst = heap.top();
    // roundoff floor: the local rule cannot do better
    if (worst.error <= 1e-15 * worst.l1) break;
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel l = evaluate(pieces, worst.piece, worst.a, mid);
    Panel r = evaluate(pieces, worst.piece, mid, worst.b);
    total += l.value + r.value - worst.value;
    error += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++panels;
  }
  // recompute to shed accumulated cancellation in the running sums
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {total, error};
}

void check_args(double x, double t) {
  if (!std::isfinite(x) || x <= 0.0) throw DomainError("step model probes need x > 0");
  if (!std::isfinite(t) || t <= 0.0) throw DomainError("step model needs t > 0");
}

cplx integrate(double x, double t, const MediumParams& p, const QuadratureSpec& quad, int order) {
  check_args(x, t);
  const DerivedScales s = derive_scales(p);
  const double D = p.hbar_over_2m();
  const double K = p.barrier_wavenumber();
  const double k = s.k;
  const Integrand f{x, t, D, K, order};

  const double ks = x / (2.0 * D * t);
  const double kc = quad.cut_scale * 1.25 * std::max(K, 1.2 * ks);
  const double delta = 0.5 * std::min(k, K - k);
  // Gaussian decay exp(-D t u^2) along both rays
  const double U = std::sqrt(45.0 / (D * t));

  auto plain = [f, k](double kp) { return f.g(kp) / (kp - k); };
  const cplx gk = f.g(k);
  const double hk = 1e-4 * k;
  const cplx gprime = (f.g(k + hk) - f.g(k - hk)) / (2.0 * hk);
  auto subtracted = [f, k, gk, gprime](double kp) {
    if (std::abs(kp - k) < 1e-6 * k) return gprime;
    return (f.g(kp) - gk) / (kp - k);
  };
  // k' = K0 + sign s^2 next to the branch points +-K
  auto near_branch = [plain](double K0, double sign) {
    return Piece([plain, K0, sign](double u) { return plain(K0 + sign * u * u) * (2.0 * u); });
  };
  const cplx right_dir = std::polar(1.0, -std::numbers::pi / 4.0);
  const cplx left_dir = std::polar(1.0, 3.0 * std::numbers::pi / 4.0);
  auto right = [f, k, kc, right_dir](double u) {
    const cplx kp = kc + right_dir * u;
    return f.g(kp) / (kp - k) * right_dir;
  };
  auto left = [f, k, kc, left_dir](double u) {
    const cplx kp = -kc + left_dir * u;
    return -f.g(kp) / (kp - k) * left_dir;
  };

  const std::vector<Piece> pieces{near_branch(-K, -1.0), near_branch(-K, 1.0), Piece(plain),
                                  Piece(subtracted),     Piece(subtracted),    near_branch(K, -1.0),
                                  near_branch(K, 1.0),   Piece(right),         Piece(left)};
  const std::vector<std::pair<double, double>> ranges{
      {0.0, std::sqrt(kc - K)}, {0.0, std::sqrt(K)},           {0.0, k - delta},
      {k - delta, k},           {k, k + delta},                {0.0, std::sqrt(K - k - delta)},
      {0.0, std::sqrt(kc - K)}, {0.0, U},                      {0.0, U}};

  const cplx T = 2.0 * k / cplx(k, s.kappa0);
  double floor = quad.floor_fraction * std::abs(T) * std::exp(-s.kappa0 * x);
  if (order == 1) floor *= s.omegaV;
  // contour passes above the pole at k' = k
  const cplx half_residue = -kI * std::numbers::pi * gk;
  const GlobalResult acc = integrate_pieces(pieces, ranges, quad.rel_tol, floor, quad.max_panels, half_residue);
  const cplx value = acc.value + half_residue;
  const double scale = std::max(std::abs(value), floor);
  if (!(acc.error <= quad.rel_tol * scale) || !std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    std::ostringstream os;
    os << "step-model quadrature did not converge at x=" << x << " nm, t=" << t
       << " fs (error bound " << acc.error << ")";
    throw QuadratureError(os.str(), value, acc.error);
  }
  return value;
}

}  // namespace

StepEigenstate step_eigenstate(double kprime, const MediumParams& p) {
  validate(p);
  if (!std::isfinite(kprime) || kprime <= 0.0) throw DomainError("step eigenstate needs k' > 0");
  const double K = p.barrier_wavenumber();
  StepEigenstate e;
  e.kprime = kprime;
  e.above_threshold = kprime >= K;
  e.k_inside = inside_wavenumber(cplx(kprime, 0.0), K);
  e.reflection = (kprime - e.k_inside) / (kprime + e.k_inside);
  e.transmitted = 2.0 * kprime / (kprime + e.k_inside);
  return e;
}

cplx psi_step(double x, double t, const MediumParams& p, const QuadratureSpec& quad) {
  return integrate(x, t, p, quad, 0);
}

cplx dpsi_dt_step(double x, double t, const MediumParams& p, const QuadratureSpec& quad) {
  return integrate(x, t, p, quad, 1);
}

cplx psi_step_stationary(double x, double t, const MediumParams& p) {
  const DerivedScales s = derive_scales(p);
  const StepEigenstate e = step_eigenstate(s.k, p);
  return e.transmitted * std::exp(-s.kappa0 * x) * std::polar(1.0, -s.omega0 * t);
}

StepModel::StepModel(MediumParams p, QuadratureSpec quad) : params_(p), quad_(quad) {
  derive_scales(params_);
}

std::unique_ptr<TimeSignal> StepModel::at(double x) const {
  if (!std::isfinite(x) || x <= 0.0) throw DomainError("step model probes need x > 0");
  const MediumParams p = params_;
  const QuadratureSpec q = quad_;
  return std::make_unique<FunctionSignal>([x, p, q](double t) { return psi_step(x, t, p, q); },
                                          [x, p, q](double t) { return dpsi_dt_step(x, t, p, q); });
}

}  // namespace forerunner
