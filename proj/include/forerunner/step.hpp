#pragma once

#include "forerunner/model.hpp"

namespace forerunner {

// Scattering state exp(ik'x) + R exp(-ik'x) for x < 0 and T exp(ik''x) for
// x > 0 on the step V Theta(x). Below threshold k'' = i kappa.
struct StepEigenstate {
  double kprime = 0.0;
  cplx reflection;
  cplx transmitted;
  cplx k_inside;  // k'' (i kappa below threshold)
  bool above_threshold = false;
};

StepEigenstate step_eigenstate(double kprime, const MediumParams& p);

struct QuadratureSpec {
  // Accepted error estimate relative to max(|Psi|, floor_fraction * |T(k) exp(-kappa0 x)|).
  double rel_tol = 1e-9;
  double floor_fraction = 1e-3;
  std::size_t max_panels = 20000;
  // Multiplies the real-axis half-width before the tails are rotated.
  double cut_scale = 1.0;
};

// Psi(x, t) for the initial state exp(ikx) Theta(-x), x > 0, t > 0.
cplx psi_step(double x, double t, const MediumParams& p, const QuadratureSpec& quad = {});
cplx dpsi_dt_step(double x, double t, const MediumParams& p, const QuadratureSpec& quad = {});

// Long-time limit T(k) exp(-kappa0 x) exp(-i w0 t).
cplx psi_step_stationary(double x, double t, const MediumParams& p);

class StepModel final : public WaveModel {
 public:
  explicit StepModel(MediumParams p, QuadratureSpec quad = {});
  std::string name() const override { return "step"; }
  const MediumParams& params() const override { return params_; }
  std::unique_ptr<TimeSignal> at(double x) const override;

 private:
  MediumParams params_;
  QuadratureSpec quad_;
};

}  // namespace forerunner
