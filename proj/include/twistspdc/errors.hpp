#pragma once

#include <stdexcept>
#include <string>

namespace twistspdc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class WrongDimension : public Error {
 public:
  using Error::Error;
};

/// Eigenvalues of Omega*V did not come out as +-i*nu pairs.
class PairingDefect : public Error {
 public:
  PairingDefect(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public InvalidParams {
 public:
  using InvalidParams::InvalidParams;
};

class TwistBoundViolation : public InvalidParams {
 public:
  using InvalidParams::InvalidParams;
};

/// Symmetric-waist mixture: the remainder after subtracting the coherent component is not PSD.
class InfeasibleWaist : public Error {
 public:
  InfeasibleWaist(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Malformed or unreadable sweep configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace twistspdc
