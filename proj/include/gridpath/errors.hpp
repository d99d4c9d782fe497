#pragma once

#include <stdexcept>
#include <string>

namespace gridpath {

/// Invalid run configuration (bad key, rejected combination). CLI exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Corrupt or inconsistent dataset/checkpoint files. CLI exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite loss or other numeric breakdown during training. CLI exit code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gridpath
