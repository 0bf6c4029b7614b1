#pragma once

#include <stdexcept>
#include <string>

namespace landau {

// Error taxonomy mirrors the CLI exit codes:
//   validation_error -> 2 (bad configuration or malformed input)
//   window_error     -> 3 (request leaves the computational domain)
//   numeric_error    -> 4 (solver failure, out-of-band renormalization, ...)
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

class window_error : public std::runtime_error {
public:
    explicit window_error(const std::string& what) : std::runtime_error(what) {}
};

class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

class format_error : public std::runtime_error {
public:
    explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace landau
