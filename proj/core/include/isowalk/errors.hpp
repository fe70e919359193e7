#pragma once

#include <stdexcept>
#include <string>

namespace isowalk {

// Error categories double as CLI exit codes.
enum class ErrorCategory : int {
    input = 2,
    precondition = 3,
    consistency = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

/// Malformed or out-of-domain input (bad discriminant, parse error, ...).
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(ErrorCategory::input, what) {}
};

/// Input is well formed but an operation's precondition does not hold.
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what)
        : Error(ErrorCategory::precondition, what) {}
};

/// A self-check failed; indicates a bug or inconsistent inputs.
class ConsistencyError : public Error {
public:
    explicit ConsistencyError(const std::string& what)
        : Error(ErrorCategory::consistency, what) {}
};

}  // namespace isowalk
