#pragma once

#include <stdexcept>
#include <string>

namespace adeleforge {

/// Base class of every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroInput : Error {
  ZeroInput() : Error("zero input where a nonzero value is required") {}
};

struct PrimeMismatch : Error {
  PrimeMismatch() : Error("p-adic operands use different primes") {}
};

struct PrecisionExceeded : Error {
  using Error::Error;
};

/// Residue information needed beyond the precision carried by a local datum.
/// `where` names the offending place and coordinate when known.
struct InsufficientPrecision : Error {
  std::string where;
  explicit InsufficientPrecision(std::string where_)
      : Error("insufficient precision at " + where_), where(std::move(where_)) {}
};

struct UnknownSign : Error {
  UnknownSign() : Error("sign of real component unknown") {}
};

struct RelevantPlaceExcluded : Error {
  using Error::Error;
};

struct DegenerateDivisor : Error {
  using Error::Error;
};

struct CenterNotOnFiber : Error {
  using Error::Error;
};

struct SaturationNotCertified : Error {
  using Error::Error;
};

struct UnsupportedShape : Error {
  using Error::Error;
};

struct NotSplit : Error {
  using Error::Error;
};

struct NonUnitAtV0 : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

}  // namespace adeleforge
