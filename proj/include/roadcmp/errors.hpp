#pragma once

#include <stdexcept>
#include <string>

namespace roadcmp {

// Malformed input bytes (JSON/GeoJSON parse problems).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally invalid graph data (e.g. dangling edge endpoints).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace roadcmp
