#pragma once

#include <stdexcept>
#include <string>

namespace critlen {

/// Invalid arguments or an operation applied outside its contract.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to meet its tolerance (non-convergence,
/// overflow, missing bracket).
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An identity that divides by p'(x) was evaluated where p'(x) = 0.
class SingularPoint : public std::domain_error {
public:
    explicit SingularPoint(double x_, const std::string& what)
        : std::domain_error(what), x(x_) {}

    double x;
};

} // namespace critlen
