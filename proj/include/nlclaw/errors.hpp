#pragma once

#include <stdexcept>
#include <string>

namespace nlclaw {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A kernel or grid is too coarse for the requested operation.
class ResolutionError : public Error {
public:
  using Error::Error;
};

/// Two grid functions (or a kernel and a grid function) live on different grids.
class GridMismatch : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// The per-step fixed-point iteration did not reach tolerance.
class PicardDivergence : public Error {
public:
  using Error::Error;
};

class CflViolation : public Error {
public:
  using Error::Error;
};

class InvalidFlux : public Error {
public:
  using Error::Error;
};

class NoCrossing : public Error {
public:
  using Error::Error;
};

class MultipleCrossings : public Error {
public:
  using Error::Error;
};

} // namespace nlclaw
