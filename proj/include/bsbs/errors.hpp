#pragma once

#include <stdexcept>

namespace bsbs {

// Bad input: parameter files, flags, preconditions. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadrature failure, blow-up, non-finite results. Maps to CLI exit code 1.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bsbs
