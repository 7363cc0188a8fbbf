#pragma once

#include <stdexcept>
#include <string>

namespace zl {

// Input outside a function's mathematical domain (e.g. t below t_min).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Input outside the range covered by a table (ladder image, sieve limit).
struct RangeError : std::runtime_error {
    explicit RangeError(const std::string& what) : std::runtime_error(what) {}
};

// A theorem-side constraint (U <= T/ln T) violated while running strict.
struct ConstraintError : std::runtime_error {
    explicit ConstraintError(const std::string& what) : std::runtime_error(what) {}
};

// An iteration failed to meet its tolerance; signals a corrupted table or a bug.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// A request would exceed a configured resource cap (panel count, memory).
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// File I/O or parse failure.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace zl
