#pragma once

#include <stdexcept>
#include <string>

namespace balsa {

// Base class for everything this library throws on purpose.
// std::logic_error is reserved for internal invariant breakage (bugs).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};

struct SelfLoopError : Error {
  using Error::Error;
};

struct VertexOutOfRangeError : Error {
  using Error::Error;
};

struct NotASpanningTreeError : Error {
  using Error::Error;
};

struct EdgeInTreeError : Error {
  using Error::Error;
};

struct EdgeNotInTreeError : Error {
  using Error::Error;
};

struct InvalidFactorizationError : Error {
  using Error::Error;
};

struct InvalidSwapError : Error {
  using Error::Error;
};

struct NotDegreeThreeError : Error {
  using Error::Error;
};

struct CaseNotPresentError : Error {
  using Error::Error;
};

struct ImbalancedInputError : Error {
  using Error::Error;
};

struct NotADoubleTreeError : Error {
  using Error::Error;
};

struct NotKMultipleTreeError : Error {
  using Error::Error;
};

struct InvalidHalvesError : Error {
  using Error::Error;
};

struct TooLargeError : Error {
  using Error::Error;
};

// Raised when the 2-balancing driver cannot certify the <= 5 bound on an
// instance. Carries the path of the persisted instance (empty if persistence
// was disabled).
struct BoundNotCertifiedError : Error {
  std::string persisted_path;
  BoundNotCertifiedError(const std::string& msg, std::string path)
      : Error(msg), persisted_path(std::move(path)) {}
};

// Raised when first-tree extraction hits its iteration cap.
struct IterationCapExceededError : Error {
  std::string persisted_path;
  int iterations;
  IterationCapExceededError(const std::string& msg, std::string path, int iters)
      : Error(msg), persisted_path(std::move(path)), iterations(iters) {}
};

}  // namespace balsa
