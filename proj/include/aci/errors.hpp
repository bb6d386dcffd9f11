#pragma once

#include <stdexcept>
#include <string>

namespace aci {

enum class Err {
  DivisionByZero,
  MixedFields,
  InfiniteField,
  NonAffine,
  ColumnSharing,
  UnknownIndeterminate,
  DimensionMismatch,
  IndexOutOfRange,
  MissingAssignment,
  BudgetExceeded,
  TooManyColumns,
  SyntaxError,
  UnknownField,
  FieldTooSmall,
  NotConstantRank,
  ReductionFailed,
  InternalAssertionFailed,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::DivisionByZero: return "DivisionByZero";
    case Err::MixedFields: return "MixedFields";
    case Err::InfiniteField: return "InfiniteField";
    case Err::NonAffine: return "NonAffine";
    case Err::ColumnSharing: return "ColumnSharing";
    case Err::UnknownIndeterminate: return "UnknownIndeterminate";
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::IndexOutOfRange: return "IndexOutOfRange";
    case Err::MissingAssignment: return "MissingAssignment";
    case Err::BudgetExceeded: return "BudgetExceeded";
    case Err::TooManyColumns: return "TooManyColumns";
    case Err::SyntaxError: return "SyntaxError";
    case Err::UnknownField: return "UnknownField";
    case Err::FieldTooSmall: return "FieldTooSmall";
    case Err::NotConstantRank: return "NotConstantRank";
    case Err::ReductionFailed: return "ReductionFailed";
    case Err::InternalAssertionFailed: return "InternalAssertionFailed";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Err kind, const std::string& msg)
      : std::runtime_error(std::string(err_name(kind)) + ": " + msg), kind_(kind) {}

  Err kind() const noexcept { return kind_; }

 private:
  Err kind_;
};

[[noreturn]] inline void fail(Err kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, Err kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

}  // namespace aci
