#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace polyreal {

enum class ErrorCode {
    InvalidRelation,
    EmptyRelation,
    NotGraded,
    NotDiamond,
    FlagCapExceeded,
    NotBipartite,
    NoExtraFacet,
    ZeroMatrix,
    NotPsd,
    NotSymmetric,
    DegenerateForm,
    SignatureMismatch,
    DimensionMismatch,
    RankMismatch,
    RankAnomaly,
    NoPositiveScaling,
    CapExceeded,
    LightlikeNormal,
    PatternViolation,
    NotInRange,
    ParseError,
    InvalidArgument,
};

inline std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidRelation: return "InvalidRelation";
    case ErrorCode::EmptyRelation: return "EmptyRelation";
    case ErrorCode::NotGraded: return "NotGraded";
    case ErrorCode::NotDiamond: return "NotDiamond";
    case ErrorCode::FlagCapExceeded: return "FlagCapExceeded";
    case ErrorCode::NotBipartite: return "NotBipartite";
    case ErrorCode::NoExtraFacet: return "NoExtraFacet";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::DegenerateForm: return "DegenerateForm";
    case ErrorCode::SignatureMismatch: return "SignatureMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::RankAnomaly: return "RankAnomaly";
    case ErrorCode::NoPositiveScaling: return "NoPositiveScaling";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::LightlikeNormal: return "LightlikeNormal";
    case ErrorCode::PatternViolation: return "PatternViolation";
    case ErrorCode::NotInRange: return "NotInRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Contract violation raised by library operations. The code identifies which
/// precondition or postcondition failed; the message carries the details.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Short human-readable number for diagnostics.
inline std::string show(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace polyreal
