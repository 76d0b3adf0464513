#pragma once

#include <stdexcept>
#include <string>

namespace edgescore {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two rasters that must share dimensions do not.
class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// An operation that needs at least one edge pixel received an empty map.
class EmptyMapError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// File contents are not in a supported or well-formed raster format.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace edgescore
