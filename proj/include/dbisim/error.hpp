#pragma once

#include <stdexcept>
#include <string>

namespace dbisim {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad literal, unknown name, invalid distribution, ...
class ModelError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The number of pure choice tuples for some label set exceeds the cap.
class ChoiceExplosion : public Error {
 public:
  using Error::Error;
};

/// Two edges of a stochastic automaton become enabled at the same instant.
class DeterminismViolation : public Error {
 public:
  using Error::Error;
};

/// A cycle of zero-delay transitions.
class ZenoLoop : public Error {
 public:
  using Error::Error;
};

}  // namespace dbisim
