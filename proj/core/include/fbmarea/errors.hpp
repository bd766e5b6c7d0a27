#pragma once

#include <stdexcept>
#include <string>

namespace fbmarea {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (times outside
/// [0,T], invalid rectangles, bad Hurst parameters, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A problem is too large for an exhaustive algorithm.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Two paths or grid functions do not share the required time grid.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Two Cameron-Martin elements were built from different kernels.
class KernelMismatchError : public Error {
 public:
  using Error::Error;
};

/// A sample set cannot support the requested estimator.
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

}  // namespace fbmarea
