#pragma once

#include <stdexcept>
#include <string>

namespace bmo {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested derivative is singular at the given argument.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Point is too close to the boundary for a derivative to be taken.
class BoundaryError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Iterative solver failed to reach its residual target.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bmo
