#pragma once

#include <stdexcept>
#include <string>

namespace fisheye {

// Invalid input: violated precondition, out-of-range parameter.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Evaluation at a pole or resonance (digamma pole, sin(pi nu) = 0, coincident points).
class PoleError : public DomainError {
public:
    explicit PoleError(const std::string& what) : DomainError(what) {}
};

// An iterative method did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fisheye
