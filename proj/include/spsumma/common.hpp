#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spsumma {

/// Matrix indices are 64-bit throughout; the target corpus exceeds 2^20 rows.
using index_t = std::int64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data (file contents, index arrays) violates a format contract.
class MalformedInputError : public Error {
 public:
  using Error::Error;
};

/// Recognizable but unsupported input variant (e.g. dense or complex files).
class UnsupportedFormatError : public Error {
 public:
  using Error::Error;
};

/// Operand dimensions are incompatible.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Process-grid construction or mismatch failures.
class GridError : public Error {
 public:
  using Error::Error;
};

/// The requested algebra cannot be used on this code path.
class UnsupportedSemiringError : public Error {
 public:
  using Error::Error;
};

/// Collective misuse: root outside scope, disagreeing sizes, and the like.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// A collective was entered by some ranks but can never complete.
class DeadlockError : public Error {
 public:
  using Error::Error;
};

/// A peer rank failed first; this rank was torn down as a consequence.
class AbortedError : public Error {
 public:
  using Error::Error;
};

class InvalidRangeError : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace spsumma
