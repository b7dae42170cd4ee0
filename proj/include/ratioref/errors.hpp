#pragma once

#include <stdexcept>
#include <string>

namespace ratioref {

/// Input outside the penalty's domain (nonpositive scale, a <= 0, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Malformed or inconsistent input: dimension mismatch, unknown id, empty or
/// infeasible dictionary, wrong dictionary variant.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A theorem hypothesis required by the operation does not hold.
class PreconditionError : public std::logic_error {
 public:
  explicit PreconditionError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace ratioref
