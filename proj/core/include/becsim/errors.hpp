#pragma once

#include <stdexcept>
#include <string>

namespace becsim {

/// Requested computation exceeds a configured memory/size budget.
/// Recoverable by passing an explicit override or shrinking the problem.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine failed (eigensolver did not converge, integration
/// drift exceeded its bound, degenerate ratio in a fit).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace becsim
