#pragma once

#include <stdexcept>
#include <string>

namespace rpinch {

// Bad dimensions, singular maps, or values outside an operation's domain.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Structure constants that fail antisymmetry, Jacobi, or commutativity checks.
class StructureError : public std::runtime_error {
 public:
  explicit StructureError(const std::string& what) : std::runtime_error(what) {}
};

// Descending central series stabilizes above zero.
class NotNilpotentError : public std::runtime_error {
 public:
  explicit NotNilpotentError(const std::string& what) : std::runtime_error(what) {}
};

// Ric = 0: the pinching functional scal^2/|Ric|^2 is undefined.
class FlatMetricError : public std::runtime_error {
 public:
  explicit FlatMetricError(const std::string& what) : std::runtime_error(what) {}
};

// An operation was invoked on data that does not satisfy its contract,
// e.g. an orbit search started from an uncertified soliton.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rpinch
