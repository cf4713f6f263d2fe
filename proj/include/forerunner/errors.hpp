#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace forerunner {

// Every failure raised by the library derives from Error and carries a code
// that the C layer and the CLI map to distinct exit statuses.
enum class ErrorCode : int {
  domain = 1,
  regime = 2,
  convergence = 3,
  pole_search = 4,
  seeding = 5,
  normalization = 6,
  monotonic_signal = 7,
  fit = 8,
  missing_dependency = 9,
  no_transition = 10,
  undefined_frequency = 11,
  quadrature = 12,
  domain_truncation = 13,
  numerical = 14,
  overflow = 15,
  singular_point = 16,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& w) : Error(ErrorCode::domain, w) {}
};

// E0 >= V where a tunneling quantity was requested.
class RegimeError : public Error {
 public:
  explicit RegimeError(const std::string& w) : Error(ErrorCode::regime, w) {}
};

class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& w) : Error(ErrorCode::overflow, w) {}
};

class SingularPointError : public Error {
 public:
  explicit SingularPointError(const std::string& w) : Error(ErrorCode::singular_point, w) {}
};

// Truncated expansion did not settle. Carries the last two estimates.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& w, std::complex<double> coarse, std::complex<double> fine)
      : Error(ErrorCode::convergence, w), coarse_(coarse), fine_(fine) {}
  std::complex<double> coarse() const noexcept { return coarse_; }
  std::complex<double> fine() const noexcept { return fine_; }

 private:
  std::complex<double> coarse_, fine_;
};

class PoleSearchError : public Error {
 public:
  PoleSearchError(const std::string& w, std::complex<double> seed)
      : Error(ErrorCode::pole_search, w), seed_(seed) {}
  std::complex<double> seed() const noexcept { return seed_; }

 private:
  std::complex<double> seed_;
};

class SeedingError : public Error {
 public:
  explicit SeedingError(const std::string& w) : Error(ErrorCode::seeding, w) {}
};

class NormalizationError : public Error {
 public:
  explicit NormalizationError(const std::string& w) : Error(ErrorCode::normalization, w) {}
};

class MonotonicSignalError : public Error {
 public:
  explicit MonotonicSignalError(const std::string& w) : Error(ErrorCode::monotonic_signal, w) {}
};

class FitError : public Error {
 public:
  explicit FitError(const std::string& w) : Error(ErrorCode::fit, w) {}
};

class MissingDependencyError : public Error {
 public:
  explicit MissingDependencyError(const std::string& w) : Error(ErrorCode::missing_dependency, w) {}
};

class NoTransitionError : public Error {
 public:
  explicit NoTransitionError(const std::string& w) : Error(ErrorCode::no_transition, w) {}
};

class UndefinedFrequencyError : public Error {
 public:
  explicit UndefinedFrequencyError(const std::string& w) : Error(ErrorCode::undefined_frequency, w) {}
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& w, std::complex<double> estimate, double error_bound)
      : Error(ErrorCode::quadrature, w), estimate_(estimate), error_bound_(error_bound) {}
  std::complex<double> estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  std::complex<double> estimate_;
  double error_bound_;
};

class DomainTruncationError : public Error {
 public:
  explicit DomainTruncationError(const std::string& w) : Error(ErrorCode::domain_truncation, w) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& w) : Error(ErrorCode::numerical, w) {}
};

}  // namespace forerunner
