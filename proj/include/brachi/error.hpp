#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace brachi {

enum class ErrorCode {
    EmptyCurve,
    CurveNotAdmissible,
    NonPositiveD,
    OutOfRange,
    OutOfSector,
    CornerAtEndpoint,
    NoMidAngleCrossing,
    InadmissiblePerturbation,
    NotOnBoundary,
    NegativeSpan,
    OutsideDomain,
    Unreachable,
    InsufficientCoverage,
    GridTooCoarse,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::EmptyCurve: return "EmptyCurve";
    case ErrorCode::CurveNotAdmissible: return "CurveNotAdmissible";
    case ErrorCode::NonPositiveD: return "NonPositiveD";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::OutOfSector: return "OutOfSector";
    case ErrorCode::CornerAtEndpoint: return "CornerAtEndpoint";
    case ErrorCode::NoMidAngleCrossing: return "NoMidAngleCrossing";
    case ErrorCode::InadmissiblePerturbation: return "InadmissiblePerturbation";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::NegativeSpan: return "NegativeSpan";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::InsufficientCoverage: return "InsufficientCoverage";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace brachi
