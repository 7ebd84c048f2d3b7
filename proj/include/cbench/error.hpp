#pragma once

#include <stdexcept>
#include <string>

namespace cbench {

/// Malformed or inconsistent input data (bad manifest, bad PNG, bad CSV).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// I/O or environment failure (missing file, unwritable path).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cbench
