#pragma once

#include "forerunner/model.hpp"

namespace forerunner {

struct SourceArguments {
  cplx u0_prime;
  cplx u0_doubleprime;
  double tau;  // x / v_sc
  double C;    // sqrt(hbar / 2m)
};

// Requires t > 0 and x >= 0.
SourceArguments source_arguments(double x, double t, const MediumParams& p);

// Exact amplitude for the boundary condition Psi(0, t) = exp(-i w0 t) Theta(t).
// Returns 0 for t <= 0.
cplx psi_source(double x, double t, const MediumParams& p);
cplx dpsi_dt_source(double x, double t, const MediumParams& p);

// Stationary evanescent term, switched on at t = tau.
cplx psi_pole(double x, double t, const MediumParams& p);
// Saddle-point term.
cplx psi_saddle(double x, double t, const MediumParams& p);
// (V + x^2 m / 2t^2) / hbar
double omega_saddle(double x, double t, const MediumParams& p);

class SourceModel final : public WaveModel {
 public:
  explicit SourceModel(MediumParams p);
  std::string name() const override { return "source"; }
  const MediumParams& params() const override { return params_; }
  std::unique_ptr<TimeSignal> at(double x) const override;

 private:
  MediumParams params_;
};

}  // namespace forerunner
