#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nct {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument outside an operation's domain (negative length, c > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

struct FieldError {
  std::string path;
  std::string message;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<FieldError> errors);
  ConfigError(std::string path, std::string message);

  const std::vector<FieldError>& errors() const { return errors_; }

 private:
  std::vector<FieldError> errors_;
};

/// A physics input that cannot be used (negative phase function, bad table).
class InvalidModelError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

/// Σ_t requested at a distance where the survival probability has vanished.
class SingularTailError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DivergentMomentError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Raised by the diffusion paths when s²_Ω is infinite.
class AnomalousDiffusionError : public DivergentMomentError {
 public:
  using DivergentMomentError::DivergentMomentError;
};

class TailOverflowError : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonConvergenceError : public NumericError {
 public:
  NonConvergenceError(const std::string& what, int iterations, double residual)
      : NumericError(what), iterations_(iterations), residual_(residual) {}

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class SeriesDivergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

class KernelAccuracyError : public NumericError {
 public:
  using NumericError::NumericError;
};

class NotPositiveDefiniteError : public NumericError {
 public:
  using NumericError::NumericError;
};

class SolverError : public NumericError {
 public:
  SolverError(const std::string& what, std::vector<double> residual_history)
      : NumericError(what), history_(std::move(residual_history)) {}

  const std::vector<double>& residual_history() const { return history_; }

 private:
  std::vector<double> history_;
};

}  // namespace nct
