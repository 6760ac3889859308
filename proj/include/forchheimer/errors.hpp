#pragma once

#include <stdexcept>
#include <string>

namespace forchheimer {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// An iterative or linear-algebra procedure failed. Carries the last residual.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

class LinearSolverError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Picard iteration hit its cap before the increment test passed.
class PicardNonConvergence : public NumericalError {
public:
  PicardNonConvergence(const std::string& what, double residual, int iterations)
      : NumericalError(what, residual), iterations_(iterations) {}

  int iterations() const noexcept { return iterations_; }

private:
  int iterations_;
};

/// A field cannot be represented in the constrained discrete space
/// (nonzero normal flux through the no-flow boundary).
class ConstraintViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace forchheimer
