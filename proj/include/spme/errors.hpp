#pragma once

#include <stdexcept>
#include <string>

namespace spme {

/// Invalid parameter values or arguments (a violated precondition).
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Solver breakdown: failed factorization, Newton divergence, guard trip.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// File access or schema problems.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace spme
