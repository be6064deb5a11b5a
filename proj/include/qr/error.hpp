#pragma once

#include <stdexcept>
#include <string>

namespace qr {

// Numeric values are part of the C ABI (see qr.h); append only.
enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  NotPrime = 2,
  ReducibleModulus = 3,
  OrderOverflow = 4,
  DivisionByZero = 5,
  FieldMismatch = 6,
  SyntaxError = 7,
  UnboundVariable = 8,
  ArityTooLarge = 9,
  OrderCap = 10,
  NotNormalWhenRequired = 11,
  CosetMismatch = 12,
  SideTooLarge = 13,
  NoConvergence = 14,
  NotAbelian = 15,
  DegeneracyNotResolved = 16,
  InadmissibleQ = 17,
  EmptyAcrossSweep = 18,
  NotSubset = 19,
  Internal = 20,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qr
