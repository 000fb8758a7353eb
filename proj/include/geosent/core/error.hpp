#pragma once

#include <stdexcept>
#include <string>

namespace geosent {

/// Error categories; the numeric values are the CLI exit codes.
enum class ErrorKind {
    config = 2,
    input = 3,
    stage_order = 4,
    adapter = 5,
};

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::config: return "config";
        case ErrorKind::input: return "input";
        case ErrorKind::stage_order: return "stage order";
        case ErrorKind::adapter: return "adapter";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

class StageOrderError : public Error {
public:
    explicit StageOrderError(const std::string& what) : Error(ErrorKind::stage_order, what) {}
};

class AdapterError : public Error {
public:
    explicit AdapterError(const std::string& what) : Error(ErrorKind::adapter, what) {}
};

/// Raised when a function is called outside its documented domain.
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace geosent
