#pragma once

#include <stdexcept>
#include <string>

namespace metroflow {

/// Bad or insufficient input data (malformed files, violated preconditions).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: divergence, optimizer breakdown, non-finite results.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration or command-line usage.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace metroflow
