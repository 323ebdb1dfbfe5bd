#pragma once

#include <stdexcept>
#include <string>

namespace phasecs {

/// Invalid argument or infeasible parameter combination.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exact enumeration would exceed its configured size cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::string cap, std::string message)
      : std::runtime_error(std::move(message)), cap_(std::move(cap)) {}
  const std::string& cap() const noexcept { return cap_; }

 private:
  std::string cap_;
};

/// A numerical kernel (eigensolver, factorization) did not succeed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace phasecs
