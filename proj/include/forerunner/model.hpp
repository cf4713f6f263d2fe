#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "forerunner/faddeeva.hpp"
#include "forerunner/params.hpp"

namespace forerunner {

// Psi(x, t) at one fixed position, as a function of time.
class TimeSignal {
 public:
  virtual ~TimeSignal() = default;
  virtual cplx value(double t) const = 0;
  // Analytic dPsi/dt when the model offers one.
  virtual std::optional<cplx> derivative(double /*t*/) const { return std::nullopt; }
};

class FunctionSignal final : public TimeSignal {
 public:
  using Fn = std::function<cplx(double)>;
  explicit FunctionSignal(Fn value, Fn derivative = nullptr)
      : value_(std::move(value)), derivative_(std::move(derivative)) {}
  cplx value(double t) const override { return value_(t); }
  std::optional<cplx> derivative(double t) const override {
    if (!derivative_) return std::nullopt;
    return derivative_(t);
  }

 private:
  Fn value_, derivative_;
};

// A wavefunction evaluator. Implementations are immutable after construction,
// so one instance can be shared by concurrent readers.
class WaveModel {
 public:
  virtual ~WaveModel() = default;
  virtual std::string name() const = 0;
  virtual const MediumParams& params() const = 0;
  virtual std::unique_ptr<TimeSignal> at(double x) const = 0;
  // Smallest time at which the evaluator is reliable at x.
  virtual double earliest_time(double /*x*/) const { return 0.0; }

  cplx psi(double x, double t) const { return at(x)->value(t); }
  std::optional<cplx> dpsi_dt(double x, double t) const { return at(x)->derivative(t); }
};

}  // namespace forerunner
