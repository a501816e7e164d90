#pragma once

#include <stdexcept>
#include <string>

namespace buyback {

// Bad or missing configuration input (config files, CLI-provided scenario fields).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally valid input that violates a documented precondition or invariant.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// The requested computation has no feasible answer (e.g. an execution schedule
// that cannot fit under the participation cap). The message carries diagnostics
// such as the maximum feasible target value.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem and parsing failures surfaced by the IO layer.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace buyback
