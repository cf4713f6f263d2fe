#pragma once

#include <vector>

#include "forerunner/faddeeva.hpp"
#include "forerunner/params.hpp"

namespace forerunner {

// Square barrier of height V on [0, L]; poles k_n = a_n - i b_n.
struct ResonancePole {
  int n = 0;
  cplx k;
  // |D(k)| / |D'(k) k|
  double residual = 0.0;
};

ResonancePole partner(const ResonancePole& pole);

// D(k) = (q+k)^2 exp(-iqL) - (q-k)^2 exp(iqL), q = sqrt(k^2 - 2mV/hbar^2) on the
// principal branch.
cplx pole_condition(cplx k, const MediumParams& p);

// G(k) = (2k^2 - K^2) sin(qL)/q + 2ik cos(qL). Even in q, hence free of branch
// cuts, and D = -2iq G.
cplx barrier_secular(cplx k, const MediumParams& p);
cplx barrier_secular_derivative(cplx k, const MediumParams& p);

// First N fourth-quadrant poles ordered by increasing a_n.
std::vector<ResonancePole> find_poles(const MediumParams& p, int N);

class ResonantState {
 public:
  ResonantState(const ResonancePole& pole, const MediumParams& p);

  const ResonancePole& pole() const { return pole_; }
  cplx u_at(double x) const;
  cplx u0() const { return norm_; }
  cplx uL() const { return uL_; }
  cplx normalization() const { return norm_; }
  cplx q() const { return q_; }
  ResonantState partner() const;

 private:
  ResonantState() = default;
  ResonancePole pole_;
  double L_ = 0.0;
  cplx q_, norm_, uL_;
};

ResonantState resonant_state(const ResonancePole& pole, const MediumParams& p);

// rho_n = 2ik u_n(0) u_n(x) / (k^2 - k_n^2)
cplx rho_factor(double k, const ResonantState& state, double x);

namespace detail {
// sin(qL)/q, even in q
cplx sinc_length(cplx q, double L);
// (L cos(qL) - sin(qL)/q) / q^2
cplx sinc_length_slope(cplx q, double L);
}  // namespace detail

}  // namespace forerunner
