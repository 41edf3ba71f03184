#pragma once

#include <stdexcept>
#include <string>

namespace cremona {

enum class ErrorCode {
  domain_mismatch,
  denominator_vanishes,
  division_by_zero,
  zero_denominator,
  not_prime,
  infinite_field,
  field_too_large,
  degenerate_composition,
  not_inverse,
  singular_point,
  index_out_of_range,
  not_symmetric,
  missing_identity,
  bad_prime,
  reduction_failure,
  size_mismatch,
  not_bijection,
  invalid_chunk,
  not_functional,
  missing_basepoint,
  search_space_exceeded,
  witness_too_small,
  point_cap_exceeded,
  syntax_error,
  arity_error,
  domain_error,
  unknown_generator,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain_mismatch: return "DomainMismatch";
    case ErrorCode::denominator_vanishes: return "DenominatorVanishes";
    case ErrorCode::division_by_zero: return "DivisionByZero";
    case ErrorCode::zero_denominator: return "ZeroDenominator";
    case ErrorCode::not_prime: return "NotPrime";
    case ErrorCode::infinite_field: return "InfiniteField";
    case ErrorCode::field_too_large: return "FieldTooLarge";
    case ErrorCode::degenerate_composition: return "DegenerateComposition";
    case ErrorCode::not_inverse: return "NotInverse";
    case ErrorCode::singular_point: return "SingularPoint";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::not_symmetric: return "NotSymmetric";
    case ErrorCode::missing_identity: return "MissingIdentity";
    case ErrorCode::bad_prime: return "BadPrime";
    case ErrorCode::reduction_failure: return "ReductionFailure";
    case ErrorCode::size_mismatch: return "SizeMismatch";
    case ErrorCode::not_bijection: return "NotBijection";
    case ErrorCode::invalid_chunk: return "InvalidChunk";
    case ErrorCode::not_functional: return "NotFunctional";
    case ErrorCode::missing_basepoint: return "MissingBasepoint";
    case ErrorCode::search_space_exceeded: return "SearchSpaceExceeded";
    case ErrorCode::witness_too_small: return "WitnessTooSmall";
    case ErrorCode::point_cap_exceeded: return "PointCapExceeded";
    case ErrorCode::syntax_error: return "SyntaxError";
    case ErrorCode::arity_error: return "ArityError";
    case ErrorCode::domain_error: return "DomainError";
    case ErrorCode::unknown_generator: return "UnknownGenerator";
  }
  return "Error";
}

/// Base class of every error raised by the library. `code()` identifies the
/// failure; the message is meant for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

template <ErrorCode Code>
class TaggedError : public Error {
 public:
  explicit TaggedError(const std::string& what) : Error(Code, what) {}
};

using DomainMismatch = TaggedError<ErrorCode::domain_mismatch>;
using DenominatorVanishes = TaggedError<ErrorCode::denominator_vanishes>;
using DivisionByZero = TaggedError<ErrorCode::division_by_zero>;
using ZeroDenominator = TaggedError<ErrorCode::zero_denominator>;
using NotPrime = TaggedError<ErrorCode::not_prime>;
using InfiniteField = TaggedError<ErrorCode::infinite_field>;
using FieldTooLarge = TaggedError<ErrorCode::field_too_large>;
using DegenerateComposition = TaggedError<ErrorCode::degenerate_composition>;
using SingularPoint = TaggedError<ErrorCode::singular_point>;
using IndexOutOfRange = TaggedError<ErrorCode::index_out_of_range>;
using NotSymmetric = TaggedError<ErrorCode::not_symmetric>;
using MissingIdentity = TaggedError<ErrorCode::missing_identity>;
using BadPrime = TaggedError<ErrorCode::bad_prime>;
using ReductionFailure = TaggedError<ErrorCode::reduction_failure>;
using SizeMismatch = TaggedError<ErrorCode::size_mismatch>;
using NotBijection = TaggedError<ErrorCode::not_bijection>;
using InvalidChunk = TaggedError<ErrorCode::invalid_chunk>;
using MissingBasepoint = TaggedError<ErrorCode::missing_basepoint>;
using SearchSpaceExceeded = TaggedError<ErrorCode::search_space_exceeded>;
using WitnessTooSmall = TaggedError<ErrorCode::witness_too_small>;
using PointCapExceeded = TaggedError<ErrorCode::point_cap_exceeded>;
using UnknownGenerator = TaggedError<ErrorCode::unknown_generator>;

}  // namespace cremona
