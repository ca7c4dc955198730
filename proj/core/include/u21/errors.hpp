#pragma once

#include <stdexcept>
#include <string>

namespace u21 {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PrecisionExhausted : Error { using Error::Error; };
struct DivisionByApparentZero : Error { using Error::Error; };
struct IndeterminateValuation : Error { using Error::Error; };
struct NoSolution : Error { using Error::Error; };
struct ConstraintViolated : Error { using Error::Error; };
struct UnsupportedConfiguration : Error { using Error::Error; };
struct HypothesisViolated : Error { using Error::Error; };
struct InconclusiveEnumeration : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };

struct ParseError : Error {
  int line, column;
  ParseError(const std::string& msg, int l = 0, int c = 0)
      : Error(l > 0 ? std::to_string(l) + ":" + std::to_string(c) + ": " + msg : msg),
        line(l), column(c) {}
};

}  // namespace u21
