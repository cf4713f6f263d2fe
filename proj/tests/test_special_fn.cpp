#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "forerunner/errors.hpp"
#include "forerunner/faddeeva.hpp"

using namespace forerunner;

namespace {

struct Ref {
  double zr, zi, wr, wi;
};

const std::vector<Ref> kReference = {
#include "data/faddeeva_reference.inc"
};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

const cplx I{0.0, 1.0};

}  // namespace

TEST_CASE("w at trivial and known points") {
  CHECK(faddeeva_w(0.0) == cplx(1.0, 0.0));
  const cplx wi = faddeeva_w(I);
  CHECK(std::abs(wi.real() - 0.42758357615580700442) < 1e-15);
  CHECK(std::abs(wi.imag()) < 1e-16);
  CHECK(moshinsky_m(0.0) == cplx(0.5, 0.0));
}

TEST_CASE("w against arbitrary-precision reference values") {
  double worst_upper = 0.0, worst_lower = 0.0;
  for (const Ref& r : kReference) {
    const cplx z(r.zr, r.zi);
    const cplx e = faddeeva_w(z);
    const double err = rel(e, cplx(r.wr, r.wi));
    if (r.zi >= 0.0)
      worst_upper = std::max(worst_upper, err);
    else
      worst_lower = std::max(worst_lower, err);
  }
  MESSAGE("upper " << worst_upper << " lower " << worst_lower);
  CHECK(worst_upper < 1e-12);
  CHECK(worst_lower < 1e-12);
}

TEST_CASE("reflection and conjugation symmetries") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 2000; ++i) {
    const cplx z(u(rng), u(rng));
    const cplx a = faddeeva_w(z), b = faddeeva_w(-z);
    const cplx two_exp = 2.0 * std::exp(-z * z);
    // relative to the size of the terms; the sum cancels when exp(-z^2) is tiny
    CHECK(std::abs(a + b - two_exp) < 1e-12 * (std::abs(a) + std::abs(b)));
    CHECK(rel(faddeeva_w(-std::conj(z)), std::conj(faddeeva_w(z))) < 1e-12);
    const cplx y = z / 2.0;
    const cplx ma = moshinsky_m(y), mb = moshinsky_m(-y);
    CHECK(std::abs(ma + mb - std::exp(y * y)) < 1e-12 * (std::abs(ma) + std::abs(mb)));
  }
}

TEST_CASE("real axis has Re w = exp(-x^2)") {
  for (double x = -30.0; x <= 30.0; x += 0.37) {
    const double expected = std::exp(-x * x);
    const double got = faddeeva_w(cplx(x, 0.0)).real();
    if (expected == 0.0)
      CHECK(got == 0.0);
    else
      CHECK(std::abs(got - expected) <= 1e-12 * expected);
  }
}

TEST_CASE("derivative matches finite differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  for (int i = 0; i < 500; ++i) {
    const cplx z(u(rng), std::abs(u(rng)) - 2.0);
    const double h = 1e-5 * std::max(1.0, std::abs(z));
    const cplx fd = (faddeeva_w(z + h) - faddeeva_w(z - h)) / (2.0 * h);
    const cplx an = faddeeva_w_derivative(z);
    const cplx identity = -2.0 * z * faddeeva_w(z) + 2.0 * I / std::sqrt(std::numbers::pi);
    CHECK(rel(an, fd) < 1e-6);
    CHECK(std::abs(an - identity) < 1e-11 * (std::abs(z) * std::abs(faddeeva_w(z)) + 1.0));
  }
}

TEST_CASE("M decays for large positive real argument") {
  double prev = std::abs(moshinsky_m(1.0));
  for (double y = 2.0; y < 1e4; y *= 1.7) {
    const double m = std::abs(moshinsky_m(y));
    CHECK(m < prev);
    prev = m;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("M tail equals the subtracted expression") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> rad(0.5, 7.5);
  const double c = 1.0 / std::sqrt(std::numbers::pi);
  for (int i = 0; i < 400; ++i) {
    const cplx y = std::polar(rad(rng), ang(rng));
    const cplx direct = moshinsky_m(y) - c / (2.0 * y) + c / (4.0 * y * y * y);
    const cplx tail = moshinsky_m_tail(y);
    CHECK(std::abs(tail - direct) < 1e-13 * (std::abs(moshinsky_m(y)) + 1.0));
    const double h = 1e-5;
    const cplx fd = (moshinsky_m_tail(y + h) - moshinsky_m_tail(y - h)) / (2.0 * h);
    CHECK(std::abs(moshinsky_m_tail_derivative(y) - fd) < 1e-7 * (std::abs(fd) + std::abs(moshinsky_m(y))));
  }
  // far away the tail keeps its |y|^-5 size instead of rounding noise
  const cplx y = std::polar(400.0, -0.3);
  const cplx expected = 3.0 * c / (8.0 * std::pow(y, 5));
  CHECK(rel(moshinsky_m_tail(y), expected) < 1e-4);
}

TEST_CASE("non-finite arguments are rejected") {
  CHECK_THROWS_AS(faddeeva_w(cplx(NAN, 0.0)), DomainError);
  CHECK_THROWS_AS(moshinsky_m(cplx(0.0, INFINITY)), DomainError);
  CHECK_THROWS_AS(faddeeva_w(cplx(0.0, -40.0)), OverflowError);
}
