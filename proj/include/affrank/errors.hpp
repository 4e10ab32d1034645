#pragma once

#include <stdexcept>
#include <string>

namespace affrank {

// Caller violated a precondition (bad shape, bad parameter, mismatched fields).
struct usage_error : std::invalid_argument {
    explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

// Ill-defined field operation, e.g. division by zero.
struct arithmetic_error : std::domain_error {
    explicit arithmetic_error(const std::string& what) : std::domain_error(what) {}
};

// An enumeration would exceed the configured budget. Never downgraded to sampling.
struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace affrank
