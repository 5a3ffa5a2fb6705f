#pragma once

#include <stdexcept>
#include <string>

namespace spikerec {

/// Base class for all spikerec errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Precondition or argument violation (bad sizes, parity, ranges, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A randomized generator exhausted its attempt budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Input data is not realizable by the forward model.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// A linear system lost numerical rank (collided spikes, vanishing coefficients).
class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical routine failed to converge or left its valid regime.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The propagated component is too small to drive the downstream solve.
class ComponentTooSmallError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read, written, or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spikerec
