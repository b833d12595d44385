#pragma once

#include <stdexcept>
#include <string>

namespace pinchlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A certificate was asked about a point where its hypothesis does not hold
/// (as opposed to the certificate itself failing).
class HypothesisNotMet : public Error {
 public:
  explicit HypothesisNotMet(const std::string& what) : Error("hypothesis not met: " + what) {}
};

class NotEqualityPoint : public Error {
 public:
  explicit NotEqualityPoint(const std::string& what) : Error("not an equality point: " + what) {}
};

}  // namespace pinchlab
