#pragma once

#include <stdexcept>
#include <string>

namespace wallflux {

/// Bad run configuration (unknown keys, invalid parameter ranges). CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad or insufficient input data (snapshots, coverage). CLI exit code 3.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Domain/precondition violations of library operations.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wallflux
