#pragma once

#include <stdexcept>
#include <string>

namespace orderlab {

/// Two internal routes that must agree disagreed (e.g. a count changed when
/// its certified enumeration box was enlarged). Always a bug or a corrupted
/// predicate, never a recoverable condition.
struct internal_consistency_error : std::runtime_error {
    explicit internal_consistency_error(const std::string& what)
        : std::runtime_error(what) {}
};

/// A configuration window is too small to certify the requested evaluation.
/// Raised instead of silently truncating.
struct insufficient_window_error : std::invalid_argument {
    explicit insufficient_window_error(const std::string& what)
        : std::invalid_argument(what) {}
};

struct unsupported_operation_error : std::invalid_argument {
    explicit unsupported_operation_error(const std::string& what)
        : std::invalid_argument(what) {}
};

} // namespace orderlab
