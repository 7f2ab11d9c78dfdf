#pragma once

#include <stdexcept>
#include <string>

namespace qgmi {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Root bracket without a sign change.
class BracketError : public std::runtime_error {
 public:
  explicit BracketError(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative method hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Simulation or sweep parameters out of the supported range.
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qgmi
