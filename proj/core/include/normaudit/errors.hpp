#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace normaudit {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// --- value / point errors ---------------------------------------------------

class UnknownNameError : public Error {
public:
  using Error::Error;
};

class NonFiniteError : public Error {
public:
  using Error::Error;
};

class ConstraintViolatedError : public Error {
public:
  using Error::Error;
};

class UnsupportedTagError : public Error {
public:
  using Error::Error;
};

// --- counterfactual evaluation ----------------------------------------------

class DimMismatchError : public Error {
public:
  using Error::Error;
};

class ZeroDenominatorError : public Error {
public:
  using Error::Error;
};

class NoDensityError : public Error {
public:
  using Error::Error;
};

class OffGridError : public Error {
public:
  using Error::Error;
};

class DegenerateQuantilesError : public Error {
public:
  using Error::Error;
};

// Raised by eval_expr / counterfactual closures when the math leaves its
// domain (log of a nonpositive number, division by zero, ...). The audit
// engine converts this into EvalFailedError with the offending element.
class DomainError : public Error {
public:
  using Error::Error;
};

// --- chart geometry -----------------------------------------------------------

class ChartSingularError : public Error {
public:
  using Error::Error;
};

class ZeroVectorError : public Error {
public:
  using Error::Error;
};

// --- singularity probe --------------------------------------------------------

class TrivialCocycleError : public Error {
public:
  using Error::Error;
};

class DomainViolationError : public Error {
public:
  using Error::Error;
};

// --- DSL ----------------------------------------------------------------------

// Parse-stage errors carry the byte offset into the source text.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

class SyntaxError : public ParseError {
public:
  using ParseError::ParseError;
};

class UnknownFunctionError : public ParseError {
public:
  using ParseError::ParseError;
};

class ArityError : public ParseError {
public:
  using ParseError::ParseError;
};

class UnboundIdentifierError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class SchemaError : public Error {
public:
  using Error::Error;
};

class ResolutionError : public Error {
public:
  using Error::Error;
};

}  // namespace normaudit
