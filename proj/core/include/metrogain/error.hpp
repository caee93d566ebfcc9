#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace metrogain {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (negative time,
// non-positive rate, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Brute-force paths are capped at kMaxBruteForceQubits.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Malformed input: non-Hermitian matrices, bad config files, bad CLI values.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Preparation plus readout leaves no sensing time inside the isolated
// probe's coherence window.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class UnsupportedModelError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

// The cubic closed form for the quadratic decay law selected a root that is
// not real and positive. All three Cardano roots are kept for diagnosis.
class BranchError : public SolverError {
 public:
  BranchError(const std::string& what, std::array<std::complex<double>, 3> roots)
      : SolverError(what), roots_(roots) {}

  const std::array<std::complex<double>, 3>& roots() const noexcept { return roots_; }

 private:
  std::array<std::complex<double>, 3> roots_;
};

class NoThresholdError : public SolverError {
 public:
  enum class Side { AlwaysAbove, AlwaysBelow };

  NoThresholdError(const std::string& what, Side side) : SolverError(what), side_(side) {}

  // AlwaysAbove: r > 1 over the whole bracket; AlwaysBelow: r < 1 throughout.
  Side side() const noexcept { return side_; }

 private:
  Side side_;
};

}  // namespace metrogain
