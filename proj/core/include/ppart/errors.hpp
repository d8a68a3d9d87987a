#pragma once

#include <stdexcept>
#include <string>

namespace ppart {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or string. `where` is a human-readable location
// ("line 12", "byte 40", "$.atoms[2]").
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string where = {})
      : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

class TrialBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class InternalRandomnessFailure : public Error {
 public:
  using Error::Error;
};

class DegenerateSimplex : public Error {
 public:
  using Error::Error;
};

class ShearBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class PerturbationExhausted : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace ppart
