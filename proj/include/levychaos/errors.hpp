#pragma once

#include <stdexcept>
#include <string>

namespace levychaos {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A configured size guard (degree cap, point cap, atom-tuple work) was tripped.
class ResourceError : public std::runtime_error {
public:
    ResourceError(std::string guard, const std::string& what)
        : std::runtime_error(what), guard_(std::move(guard)) {}

    const std::string& guard() const noexcept { return guard_; }

private:
    std::string guard_;
};

/// A computed quantity overflowed to inf/nan.
class NonFiniteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed configuration or kernel document. `pointer` is a JSON pointer to the offending node.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string pointer, const std::string& message)
        : std::runtime_error(pointer + ": " + message), pointer_(std::move(pointer)) {}

    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

}  // namespace levychaos
