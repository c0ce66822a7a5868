#pragma once

#include "metroflow/core/error.hpp"

#include <string>

namespace metroflow {

/// Runs `fn`, prefixing any library error with the pipeline stage while keeping its type.
template <class Fn>
auto staged(const std::string& stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError(stage + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(stage + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(stage + ": " + e.what());
    }
}

} // namespace metroflow
