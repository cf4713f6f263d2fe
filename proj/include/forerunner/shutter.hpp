#pragma once

#include <memory>
#include <vector>

#include "forerunner/model.hpp"
#include "forerunner/resonances.hpp"

namespace forerunner {

// Stationary solution inside [0, L] for unit incidence of exp(ikx); the sign of
// k selects phi_k or phi_{-k}.
cplx phi_stationary(double k, double x, const MediumParams& p);

struct ScatteringAmplitudes {
  cplx reflection;
  cplx transmission;
};
ScatteringAmplitudes stationary_amplitudes(double k, const MediumParams& p);

class ShutterSolution {
 public:
  ShutterSolution(const MediumParams& p, int N);
  ShutterSolution(const MediumParams& p, std::vector<ResonancePole> poles);

  // Below this time the damping exp(-2 D t a_N b_N) of the last retained pole
  // term is too weak for the truncated sum to be trusted.
  double earliest_time() const;

  // Smallest power-of-two truncation for which doubling changes Psi by less
  // than rel_tol at a fixed set of probe points.
  static ShutterSolution converged(const MediumParams& p, double rel_tol = 1e-8, int max_poles = 16384);

  const MediumParams& params() const { return params_; }
  int N() const { return static_cast<int>(states_.size()); }
  double k() const { return k_; }
  const std::vector<ResonantState>& poles() const { return states_; }

 private:
  MediumParams params_;
  double k_;
  std::vector<ResonantState> states_;
};

// Resonance expansion of the internal wave over n = +-1 .. +-N, after
// subtracting the two leading terms of the large-argument expansion of M,
// whose sums are known in closed form.
// Throws ConvergenceError when the partial sums at N/2 and N differ by more
// than rel_tol relative to max(|Psi|, |phi_k(x)|/100, 1e-10). At t = 0 returns the
// initial condition, 0.
cplx psi_internal(double x, double t, const ShutterSolution& sol, double rel_tol = 1e-6);
cplx dpsi_dt_internal(double x, double t, const ShutterSolution& sol, double rel_tol = 1e-6);

// phi_k(x) - phi_{-k}(x) - sum_{n=-N}^{N} rho_n(x), i.e. twice the plain
// truncated expansion at t = 0.
cplx initial_sum_rule_defect(double x, const ShutterSolution& sol, int N);

// [time][x] densities
std::vector<std::vector<double>> density_snapshots(const std::vector<double>& times,
                                                   const std::vector<double>& xs,
                                                   const ShutterSolution& sol,
                                                   double rel_tol = 1e-6);

namespace detail {
// Closed forms of sum_n rho_n / k_n and sum_n rho_n / k_n^3 over n = +-1, +-2, ...
struct ClosedSums {
  cplx inverse_first;
  cplx inverse_third;
};
ClosedSums shutter_closed_sums(double x, const MediumParams& p);
}  // namespace detail

class ShutterModel final : public WaveModel {
 public:
  explicit ShutterModel(std::shared_ptr<const ShutterSolution> sol, double rel_tol = 1e-6);
  std::string name() const override { return "shutter"; }
  const MediumParams& params() const override { return sol_->params(); }
  std::unique_ptr<TimeSignal> at(double x) const override;
  // max of the solution bound and 8 x / (2 D a_N)
  double earliest_time(double x) const override;
  const ShutterSolution& solution() const { return *sol_; }

 private:
  std::shared_ptr<const ShutterSolution> sol_;
  double rel_tol_;
};

}  // namespace forerunner
