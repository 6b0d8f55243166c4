#pragma once

#include <stdexcept>
#include <string>

namespace startor {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : error { using error::error; };
struct CompositionNotZero : error { using error::error; };
struct ZeroVector : error { using error::error; };
struct UnknownVertex : error { using error::error; };
struct ConeNotInFan : error { using error::error; };
struct RankMismatch : error { using error::error; };
struct DegreeOutOfRange : error { using error::error; };
struct NotACocycle : error { using error::error; };
struct CanonicalModeNeedsHalf : error { using error::error; };
struct NotMomentAngleCase : error { using error::error; };
struct TooLarge : error { using error::error; };
struct SyntaxError : error {
    std::size_t column;  // 1-based
    SyntaxError(const std::string& msg, std::size_t col)
        : error(msg + " (column " + std::to_string(col) + ")"), column(col) {}
};
struct UnknownGenerator : error { using error::error; };

}  // namespace startor
