#pragma once

#include <stdexcept>
#include <string>

namespace fschubert {

// Bad input: malformed data, invariant violations, unsupported requests.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition (mixed rings, Ξ' not in Ξ, ...).
class UsageError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Exact arithmetic could not produce the promised object.
class ArithmeticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Truncated series ran out of certified degrees.  `needed` is a lower bound
// on how many extra degrees of truncation would have been required.
class PrecisionError : public ArithmeticError {
public:
    explicit PrecisionError(const std::string& what, int needed = 1)
        : ArithmeticError(what), needed_(needed) {}
    int needed() const noexcept { return needed_; }

private:
    int needed_;
};

// Configured size bound exceeded (Weyl group enumeration).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fschubert
