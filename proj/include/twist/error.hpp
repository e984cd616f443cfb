#pragma once

#include <stdexcept>
#include <string>

namespace twist {

enum class Err {
  DivisionByZero,
  SyntaxError,
  UnknownName,
  SchemaError,
  NonTerminatingSeries,
  InverseNotFound,
  FiltrationViolation,
  ModeUnsupported,
  CentralizerViolation,
  NotInvertible,
  BoxTooSmall,
  Internal,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::DivisionByZero: return "DivisionByZero";
    case Err::SyntaxError: return "SyntaxError";
    case Err::UnknownName: return "UnknownName";
    case Err::SchemaError: return "SchemaError";
    case Err::NonTerminatingSeries: return "NonTerminatingSeries";
    case Err::InverseNotFound: return "InverseNotFound";
    case Err::FiltrationViolation: return "FiltrationViolation";
    case Err::ModeUnsupported: return "ModeUnsupported";
    case Err::CentralizerViolation: return "CentralizerViolation";
    case Err::NotInvertible: return "NotInvertible";
    case Err::BoxTooSmall: return "BoxTooSmall";
    case Err::Internal: return "Internal";
  }
  return "Unknown";
}

// All engine failures are reported through this type; kind() selects the
// CLI exit code and machine-report status.
class Error : public std::runtime_error {
 public:
  Error(Err kind, const std::string& msg)
      : std::runtime_error(std::string(err_name(kind)) + ": " + msg), kind_(kind) {}
  Err kind() const { return kind_; }

 private:
  Err kind_;
};

[[noreturn]] inline void fail(Err kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace twist
