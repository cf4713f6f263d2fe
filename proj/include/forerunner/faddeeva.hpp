#pragma once

#include <complex>

namespace forerunner {

using cplx = std::complex<double>;

// w(z) = exp(-z^2) erfc(-i z)
cplx faddeeva_w(cplx z);
// dw/dz
cplx faddeeva_w_derivative(cplx z);

// M(y) = w(i y) / 2
cplx moshinsky_m(cplx y);
cplx moshinsky_m_derivative(cplx y);

// M(y) - 1/(2 sqrt(pi) y) + 1/(4 sqrt(pi) y^3), evaluated without cancellation
// for large |y|. The subtracted terms are the first two of the large-|y|
// expansion in both half-planes, so the result falls off like |y|^-5 away from
// the growing exponential sector.
cplx moshinsky_m_tail(cplx y);
cplx moshinsky_m_tail_derivative(cplx y);

// exp(-z^2) with the phase reduced in extended precision. Throws OverflowError
// when the modulus is not representable.
cplx exp_minus_square(cplx z);

}  // namespace forerunner
