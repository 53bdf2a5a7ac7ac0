#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace gnskit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text, unknown identifiers, out-of-range arguments.
class InputError : public Error {
public:
    using Error::Error;
};

/// A caller-supplied object does not satisfy the precondition of an
/// operation (e.g. a claimed feedback vertex set leaves a cycle).
class ContractError : public InputError {
public:
    using InputError::InputError;
};

/// The instance is larger than a configured cap allows.
class CapacityError : public Error {
public:
    CapacityError(std::string cap, std::size_t limit, const std::string& what)
        : Error(what + " (cap " + cap + "=" + std::to_string(limit) + ")"),
          cap_(std::move(cap)), limit_(limit) {}

    const std::string& cap() const noexcept { return cap_; }
    std::size_t limit() const noexcept { return limit_; }

private:
    std::string cap_;
    std::size_t limit_;
};

/// Internal invariant violation: a computed certificate failed to verify.
class InvariantError : public Error {
public:
    using Error::Error;
};

}  // namespace gnskit
