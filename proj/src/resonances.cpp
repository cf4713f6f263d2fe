#include "forerunner/resonances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "forerunner/errors.hpp"

namespace forerunner {
namespace {

const cplx kI{0.0, 1.0};

double barrier_k2(const MediumParams& p) { return p.V / p.hbar_sq_over_2m(); }

cplx wavenumber_inside(cplx k, double K2) { return std::sqrt(k * k - K2); }

void check_finite(cplx k) {
  if (!std::isfinite(k.real()) || !std::isfinite(k.imag()))
    throw DomainError("non-finite wavenumber");
}

template <class T>
std::complex<T> sinc_length_t(std::complex<T> q, T L) {
  const std::complex<T> u = q * L;
  if (std::abs(u) < T(1e-4)) return L * (T(1) - u * u / T(6));
  return std::sin(u) / q;
}

template <class T>
std::complex<T> sinc_length_slope_t(std::complex<T> q, T L) {
  const std::complex<T> u = q * L;
  if (std::abs(u) < T(1e-2)) {
    const std::complex<T> u2 = u * u;
    return L * L * L * (T(-1) / T(3) + u2 / T(30) - u2 * u2 / T(840));
  }
  return (L * std::cos(u) - std::sin(u) / q) / (q * q);
}

template <class T>
std::complex<T> secular_t(std::complex<T> k, T L, T K2) {
  const std::complex<T> i(0, 1);
  const std::complex<T> q = std::sqrt(k * k - K2);
  return (T(2) * k * k - K2) * sinc_length_t(q, L) + T(2) * i * k * std::cos(q * L);
}

template <class T>
std::complex<T> secular_derivative_t(std::complex<T> k, T L, T K2) {
  const std::complex<T> i(0, 1);
  const std::complex<T> q = std::sqrt(k * k - K2);
  const std::complex<T> S = sinc_length_t(q, L);
  const std::complex<T> Ts = sinc_length_slope_t(q, L);
  return T(4) * k * S + (T(2) * k * k - K2) * k * Ts + T(2) * i * std::cos(q * L) -
         T(2) * i * k * k * L * S;
}

}  // namespace

namespace detail {

cplx sinc_length(cplx q, double L) { return sinc_length_t(q, L); }

cplx sinc_length_slope(cplx q, double L) { return sinc_length_slope_t(q, L); }

}  // namespace detail

ResonancePole partner(const ResonancePole& pole) {
  return {-pole.n, -std::conj(pole.k), pole.residual};
}

cplx pole_condition(cplx k, const MediumParams& p) {
  check_finite(k);
  const double L = p.length();
  const cplx q = wavenumber_inside(k, barrier_k2(p));
  const cplx e = std::exp(kI * q * L);
  return (q + k) * (q + k) / e - (q - k) * (q - k) * e;
}

cplx barrier_secular(cplx k, const MediumParams& p) {
  check_finite(k);
  return secular_t(k, p.length(), barrier_k2(p));
}

cplx barrier_secular_derivative(cplx k, const MediumParams& p) {
  check_finite(k);
  return secular_derivative_t(k, p.length(), barrier_k2(p));
}

namespace {

cplx seed_pole(int n, const MediumParams& p) {
  const double L = p.length();
  const double K2 = barrier_k2(p);
  cplx q = n * std::numbers::pi / L;
  for (int it = 0; it < 8; ++it) {
    const cplx k = std::sqrt(q * q + K2);
    q = (n * std::numbers::pi + kI * std::log((k - q) / (k + q))) / L;
  }
  return std::sqrt(q * q + K2);
}

ResonancePole refine_pole(int n, cplx seed, const MediumParams& p) {
  // Extended precision keeps the rounding floor of G, about eps |qL| |k|, well
  // below the certificate threshold for high-order poles.
  using LD = long double;
  using LC = std::complex<LD>;
  const LD L = p.length();
  const LD K2 = barrier_k2(p);
  LC kk(seed.real(), seed.imag());
  LD last_step = std::numeric_limits<LD>::infinity();
  for (int it = 0; it < 60; ++it) {
    const LC step = secular_t(kk, L, K2) / secular_derivative_t(kk, L, K2);
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    kk -= step;
    last_step = std::abs(step);
    if (last_step <= 4.0L * std::numeric_limits<LD>::epsilon() * std::abs(kk)) break;
  }
  const cplx k(static_cast<double>(kk.real()), static_cast<double>(kk.imag()));
  const bool converged = last_step <= 1e-9L * std::abs(kk);
  const LC kd(k.real(), k.imag());
  const double residual = static_cast<double>(std::abs(secular_t(kd, L, K2)) /
                                              std::abs(secular_derivative_t(kd, L, K2) * kd));
  if (!converged || !(residual < 1e-10) || k.real() <= 0.0 || k.imag() >= 0.0) {
    std::ostringstream os;
    os << "Newton iteration for pole n=" << n << " from seed " << seed.real() << (seed.imag() < 0 ? "" : "+")
       << seed.imag() << "i did not converge (residual " << residual << ")";
    throw PoleSearchError(os.str(), seed);
  }
  return {n, k, residual};
}

}  // namespace

std::vector<ResonancePole> find_poles(const MediumParams& p, int N) {
  validate(p);
  p.length();
  if (N < 1) throw DomainError("pole count must be at least 1");
  std::vector<ResonancePole> poles;
  poles.reserve(N);
  for (int n = 1; n <= N; ++n) poles.push_back(refine_pole(n, seed_pole(n, p), p));
  std::sort(poles.begin(), poles.end(),
            [](const ResonancePole& a, const ResonancePole& b) { return a.k.real() < b.k.real(); });
  for (std::size_t i = 1; i < poles.size(); ++i) {
    if (std::abs(poles[i].k - poles[i - 1].k) <= 1e-6) {
      std::ostringstream os;
      os << "seeds n=" << poles[i - 1].n << " and n=" << poles[i].n << " collapsed onto one pole";
      throw SeedingError(os.str());
    }
  }
  return poles;
}

ResonantState::ResonantState(const ResonancePole& pole, const MediumParams& p) {
  if (pole.n < 0) {
    *this = ResonantState(forerunner::partner(pole), p).partner();
    return;
  }
  pole_ = pole;
  L_ = p.length();
  const double K2 = barrier_k2(p);
  const cplx k = pole.k;
  q_ = wavenumber_inside(k, K2);
  const cplx SL = detail::sinc_length(q_, L_);
  const cplx S2 = detail::sinc_length(2.0 * q_, L_);  // sin(2qL)/(2q)
  const cplx cos_part = 0.5 * (L_ + S2);
  cplx sin_part;  // integral of sin^2(qx)/q^2 over [0, L]
  if (std::abs(q_ * L_) < 1e-2) {
    const cplx u2 = q_ * q_ * L_ * L_;
    sin_part = L_ * L_ * L_ * (1.0 / 3.0 - u2 / 15.0);
  } else {
    sin_part = (L_ - S2) / (2.0 * q_ * q_);
  }
  const cplx integral = cos_part - kI * k * SL * SL - k * k * sin_part;
  const cplx vL = std::cos(q_ * L_) - kI * k * SL;
  const cplx norm2 = integral + kI * (1.0 + vL * vL) / (2.0 * k);
  if (std::abs(norm2) < 1e-14) throw NormalizationError("degenerate Gamow normalization integral");
  norm_ = 1.0 / std::sqrt(norm2);
  uL_ = norm_ * vL;
}

ResonantState ResonantState::partner() const {
  ResonantState s;
  s.pole_ = forerunner::partner(pole_);
  s.L_ = L_;
  s.q_ = std::conj(q_);
  s.norm_ = std::conj(norm_);
  s.uL_ = std::conj(uL_);
  return s;
}

cplx ResonantState::u_at(double x) const {
  if (!(x >= 0.0 && x <= L_)) throw DomainError("resonant state evaluated outside [0, L]");
  return norm_ * (std::cos(q_ * x) - kI * pole_.k * detail::sinc_length(q_, x));
}

ResonantState resonant_state(const ResonancePole& pole, const MediumParams& p) {
  return ResonantState(pole, p);
}

cplx rho_factor(double k, const ResonantState& state, double x) {
  const cplx kn = state.pole().k;
  return 2.0 * kI * k * state.u0() * state.u_at(x) / (k * k - kn * kn);
}

}  // namespace forerunner
