#pragma once

#include <stdexcept>
#include <string>

namespace goalstep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (sizes, ranges, pairing).
class ContractViolation : public Error {
  public:
    using Error::Error;
};

/// Invalid or inconsistent configuration (unknown ids, bad bounds).
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Parameter outside the mathematical domain of a catalogued problem.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Requested variant or order is not implemented.
class UnsupportedError : public Error {
  public:
    using Error::Error;
};

/// Not enough usable data points for a fit.
class InsufficientData : public Error {
  public:
    using Error::Error;
};

/// An implicit step hit a (numerically) singular system; retry with a smaller step.
class StepFailure : public Error {
  public:
    StepFailure(const std::string& what, double t, double dt) : Error(what), t_(t), dt_(dt) {}
    double t() const noexcept { return t_; }
    double dt() const noexcept { return dt_; }

  private:
    double t_;
    double dt_;
};

/// Non-finite stage derivative or state.
class BlowUpError : public Error {
  public:
    BlowUpError(const std::string& what, double t, double dt) : Error(what), t_(t), dt_(dt) {}
    double t() const noexcept { return t_; }
    double dt() const noexcept { return dt_; }

  private:
    double t_;
    double dt_;
};

/// Step-count guard tripped.
class ResourceError : public Error {
  public:
    using Error::Error;
};

}  // namespace goalstep
