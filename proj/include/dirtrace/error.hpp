#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dirtrace {

enum class ErrorCode {
    InvalidArgument,
    InvalidDomain,
    PointOutsideDomain,
    NotDirectionalBoundary,
    InvalidRatio,
    OverlappingGaps,
    UnknownName,
    UnresolvedSingularity,
    DivergentChordIntegral,
    NonIntegrablePairing,
    InsufficientOverlap,
    NotInH1tr,
};

std::string_view to_string(ErrorCode code);

// Validation errors map to CLI exit code 2, invariant violations to 3.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace dirtrace
