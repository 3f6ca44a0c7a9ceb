#pragma once

#include <stdexcept>
#include <string>

namespace splitdyn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SPLITDYN_DEFINE_ERROR(Name)        \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  };

SPLITDYN_DEFINE_ERROR(FieldMismatch)
SPLITDYN_DEFINE_ERROR(RootNotInField)
SPLITDYN_DEFINE_ERROR(NotNormalForm)
SPLITDYN_DEFINE_ERROR(PreconditionViolated)
SPLITDYN_DEFINE_ERROR(NoSolution)
SPLITDYN_DEFINE_ERROR(ResourceLimit)
SPLITDYN_DEFINE_ERROR(DivisionByZero)
SPLITDYN_DEFINE_ERROR(NotASolution)
SPLITDYN_DEFINE_ERROR(UnexpectedShape)
SPLITDYN_DEFINE_ERROR(EliminationCollapse)
SPLITDYN_DEFINE_ERROR(NonRepelling)
SPLITDYN_DEFINE_ERROR(ConvergenceFailure)

#undef SPLITDYN_DEFINE_ERROR

/// Syntax errors carry the 1-based line/column of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace splitdyn
