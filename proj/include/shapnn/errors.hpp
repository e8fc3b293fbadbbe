#pragma once

#include <stdexcept>
#include <string>

namespace shapnn {

// Error categories map 1:1 to CLI exit codes (see tools/main.cpp).

// Malformed or unreadable input files, I/O failures.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Arguments outside an operation's domain (bad sizes, out-of-range params).
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Structurally invalid configuration or data (dimension mismatch, bad schema).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace shapnn
