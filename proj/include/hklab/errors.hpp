#pragma once

#include <stdexcept>
#include <string>

namespace hklab {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside its admissible range (bad order, bad index, bad grid).
class OutOfRange : public Error {
public:
  using Error::Error;
};

/// Hardy quotient requested for the identically-zero sequence.
class ZeroSequence : public Error {
public:
  using Error::Error;
};

/// Vector/matrix sizes do not match.
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// A shift landed on (or within 1e-14 of) a truncated eigenvalue.
class SpectrumPoint : public Error {
public:
  using Error::Error;
};

/// Operation not available for the requested configuration (e.g. p != 2).
class Unsupported : public Error {
public:
  using Error::Error;
};

/// Iterative norm estimation did not meet its tolerance within the cap.
class NoConvergence : public Error {
public:
  using Error::Error;
};

/// Index blocks overlap or fail to cover the range.
class InvalidPartition : public Error {
public:
  using Error::Error;
};

/// Malformed input file; message carries the offending line number.
class ParseError : public Error {
public:
  using Error::Error;
};

} // namespace hklab
