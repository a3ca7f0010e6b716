#pragma once

#include <stdexcept>
#include <string>

namespace recon {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside its admissible domain (non-positive rate, bad bounds, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The queue is unstable for the requested parameters (load >= 1).
class InstabilityError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to converge or produced a non-finite value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// No admissible candidate exists (e.g. every threshold up to the cap is unstable).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an ordering or structural precondition on its inputs.
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace recon
