#pragma once

#include <stdexcept>
#include <string>

namespace ibench {

/// Raised for out-of-range actions, bad configuration, or bad harness arguments.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed or version-mismatched serialized payloads.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ibench
