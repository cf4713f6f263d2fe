#include "forerunner/faddeeva.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "forerunner/errors.hpp"

namespace forerunner {
namespace {

constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;
constexpr cplx kI{0.0, 1.0};

// Weideman's rational approximation, accurate to ~1e-15 for |z| <= 12.
constexpr int kWeidemanN = 40;
constexpr double kRationalRadius = 8.0;
constexpr int kFractionDepth = 24;

struct Weideman {
  double L;
  std::array<double, kWeidemanN> a;  // a[j] multiplies Z^j

  Weideman() {
    const int N = kWeidemanN;
    const int M = 2 * N;
    const int M2 = 2 * M;
    L = std::sqrt(N / std::numbers::sqrt2);
    std::array<double, 2 * M> f{};
    // f[0] = 0, f[1 + (k + M - 1)] for k = -M+1 .. M-1
    for (int k = -M + 1; k <= M - 1; ++k) {
      const double theta = k * std::numbers::pi / M;
      const double t = L * std::tan(theta / 2.0);
      f[k + M] = std::exp(-t * t) * (L * L + t * t);
    }
    // fftshift then real DFT, coefficients 1..N
    for (int j = 1; j <= N; ++j) {
      double acc = 0.0;
      for (int m = 0; m < M2; ++m) {
        const double v = f[(m + M) % M2];
        if (v == 0.0) continue;
        acc += v * std::cos(2.0 * std::numbers::pi * j * m / M2);
      }
      a[j - 1] = acc / M2;
    }
  }
};

const Weideman& weideman() {
  static const Weideman w;
  return w;
}

cplx w_rational(cplx z) {
  const Weideman& W = weideman();
  const cplx den = W.L - kI * z;
  const cplx Z = (W.L + kI * z) / den;
  cplx p = 0.0;
  for (int j = kWeidemanN - 1; j >= 0; --j) p = p * Z + W.a[j];
  return 2.0 * p / (den * den) + kInvSqrtPi / den;
}

// Laplace continued fraction w = (i/sqrt(pi)) / F with
// F = z - (1/2)/G, G = z - 1/H, H = z - (3/2)/..., evaluated backward.
struct Fraction {
  cplx F, G, H;
};

Fraction fraction(cplx z) {
  cplx t = z;
  cplx h = z, g = z;
  for (int n = kFractionDepth; n >= 1; --n) {
    if (n == 2) h = t;
    if (n == 1) g = t;
    t = z - (0.5 * n) / t;
  }
  return {t, g, h};
}

void check_finite(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("non-finite argument to the Faddeeva function");
}

// Upper half-plane only.
cplx w_upper(cplx z) {
  if (std::abs(z) <= kRationalRadius) {
    cplx w = w_rational(z);
    if (z.imag() == 0.0) w.real(std::exp(-z.real() * z.real()));
    return w;
  }
  const Fraction f = fraction(z);
  cplx w = kI * kInvSqrtPi / f.F;
  if (z.imag() == 0.0) w.real(std::exp(-z.real() * z.real()));
  return w;
}

cplx w_upper_derivative(cplx z) {
  if (std::abs(z) <= kRationalRadius) return -2.0 * z * w_upper(z) + 2.0 * kI * kInvSqrtPi;
  const Fraction f = fraction(z);
  return -kI * kInvSqrtPi / (f.F * f.G);
}

// w(z) - i/(sqrt(pi) z) - i/(2 sqrt(pi) z^3), upper half-plane.
cplx w_tail_upper(cplx z) {
  const cplx z3 = z * z * z;
  if (std::abs(z) <= kRationalRadius)
    return w_upper(z) - kI * kInvSqrtPi / z - 0.5 * kI * kInvSqrtPi / z3;
  const Fraction f = fraction(z);
  return kI * kInvSqrtPi * (z / f.H + 0.5) / (2.0 * f.G * f.F * z3);
}

cplx w_tail_upper_derivative(cplx z, cplx tail) {
  const cplx z2 = z * z;
  return -2.0 * z * tail + 1.5 * kI * kInvSqrtPi / (z2 * z2);
}

}  // namespace

cplx exp_minus_square(cplx z) {
  check_finite(z);
  const long double x = z.real();
  const long double y = z.imag();
  const long double re = (y - x) * (y + x);
  long double im = -2.0L * x * y;
  if (re > 709.0L) throw OverflowError("exp(-z^2) overflows double precision");
  constexpr long double two_pi = 6.283185307179586476925286766559L;
  if (std::fabs(im) > 1.0e3L) im = std::fmod(im, two_pi);
  return std::polar(static_cast<double>(std::exp(re)), static_cast<double>(im));
}

cplx faddeeva_w(cplx z) {
  check_finite(z);
  if (z.imag() >= 0.0) return w_upper(z);
  return 2.0 * exp_minus_square(z) - w_upper(-z);
}

cplx faddeeva_w_derivative(cplx z) {
  check_finite(z);
  if (z.imag() >= 0.0) return w_upper_derivative(z);
  return -4.0 * z * exp_minus_square(z) + w_upper_derivative(-z);
}

cplx moshinsky_m(cplx y) { return 0.5 * faddeeva_w(kI * y); }

cplx moshinsky_m_derivative(cplx y) { return 0.5 * kI * faddeeva_w_derivative(kI * y); }

cplx moshinsky_m_tail(cplx y) {
  check_finite(y);
  if (y == 0.0) throw SingularPointError("M tail is singular at y = 0");
  const cplx z = kI * y;
  if (z.imag() >= 0.0) return 0.5 * w_tail_upper(z);
  return exp_minus_square(z) - 0.5 * w_tail_upper(-z);
}

cplx moshinsky_m_tail_derivative(cplx y) {
  check_finite(y);
  if (y == 0.0) throw SingularPointError("M tail is singular at y = 0");
  const cplx z = kI * y;
  if (z.imag() >= 0.0) return 0.5 * kI * w_tail_upper_derivative(z, w_tail_upper(z));
  const cplx mz = -z;
  const cplx d = -2.0 * z * exp_minus_square(z) + 0.5 * w_tail_upper_derivative(mz, w_tail_upper(mz));
  return kI * d;
}

}  // namespace forerunner
