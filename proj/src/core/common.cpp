#include "qr/error.hpp"
#include "qr/rational.hpp"

#include <cmath>

namespace qr {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::ReducibleModulus: return "ReducibleModulus";
    case ErrorCode::OrderOverflow: return "OrderOverflow";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::ArityTooLarge: return "ArityTooLarge";
    case ErrorCode::OrderCap: return "OrderCap";
    case ErrorCode::NotNormalWhenRequired: return "NotNormalWhenRequired";
    case ErrorCode::CosetMismatch: return "CosetMismatch";
    case ErrorCode::SideTooLarge: return "SideTooLarge";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotAbelian: return "NotAbelian";
    case ErrorCode::DegeneracyNotResolved: return "DegeneracyNotResolved";
    case ErrorCode::InadmissibleQ: return "InadmissibleQ";
    case ErrorCode::EmptyAcrossSweep: return "EmptyAcrossSweep";
    case ErrorCode::NotSubset: return "NotSubset";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

double fourth_root(const Rational& x) {
  if (x <= 0) return 0.0;
  // Long double keeps the conversion error well below the 1e-8 comparison slack.
  long double v = x.convert_to<long double>();
  return static_cast<double>(std::sqrt(std::sqrt(v)));
}

bool le_fourth_root(const Rational& a, const Rational& b) {
  if (a < 0) return true;
  if (b < 0) return false;
  Rational a2 = a * a;
  return a2 * a2 <= b;
}

}  // namespace qr
