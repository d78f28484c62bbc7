#pragma once

#include <stdexcept>
#include <string>

namespace pagerank {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyGraph : Error {
  using Error::Error;
};
struct NegativeWeight : Error {
  using Error::Error;
};
struct IndexOutOfRange : Error {
  using Error::Error;
};
struct InvalidDelta : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct AllZeroWeights : Error {
  using Error::Error;
};
struct NonFiniteWeight : Error {
  using Error::Error;
};
struct ZeroTotalWeight : Error {
  using Error::Error;
};
struct InvalidConfig : Error {
  using Error::Error;
};
struct ZeroSteps : Error {
  using Error::Error;
};
struct DimensionTooLarge : Error {
  using Error::Error;
};
struct SingularSystem : Error {
  using Error::Error;
};
struct NotOnSimplex : Error {
  using Error::Error;
};
struct ZeroMass : Error {
  using Error::Error;
};
struct InvalidK : Error {
  using Error::Error;
};
struct InvalidParams : Error {
  using Error::Error;
};

}  // namespace pagerank
