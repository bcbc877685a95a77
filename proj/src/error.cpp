#include "dirtrace/error.hpp"

namespace dirtrace {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::PointOutsideDomain: return "PointOutsideDomain";
    case ErrorCode::NotDirectionalBoundary: return "NotDirectionalBoundary";
    case ErrorCode::InvalidRatio: return "InvalidRatio";
    case ErrorCode::OverlappingGaps: return "OverlappingGaps";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::UnresolvedSingularity: return "UnresolvedSingularity";
    case ErrorCode::DivergentChordIntegral: return "DivergentChordIntegral";
    case ErrorCode::NonIntegrablePairing: return "NonIntegrablePairing";
    case ErrorCode::InsufficientOverlap: return "InsufficientOverlap";
    case ErrorCode::NotInH1tr: return "NotInH1tr";
    }
    return "Unknown";
}

bool is_validation_error(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidDomain:
    case ErrorCode::PointOutsideDomain:
    case ErrorCode::NotDirectionalBoundary:
    case ErrorCode::InvalidRatio:
    case ErrorCode::OverlappingGaps:
    case ErrorCode::UnknownName:
        return true;
    default:
        return false;
    }
}

} // namespace dirtrace
