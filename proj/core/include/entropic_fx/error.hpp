#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace efx {

enum class ErrorCode {
    DomainError,
    GridMismatch,
    SupportViolation,
    NoConvergence,
    InfeasibleConstraints,
    MassLeak,
    NegativeDensity,
    MeasureError,
    ToleranceNotMet,
    GridTooNarrow,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::SupportViolation: return "SupportViolation";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::InfeasibleConstraints: return "InfeasibleConstraints";
        case ErrorCode::MassLeak: return "MassLeak";
        case ErrorCode::NegativeDensity: return "NegativeDensity";
        case ErrorCode::MeasureError: return "MeasureError";
        case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
        case ErrorCode::GridTooNarrow: return "GridTooNarrow";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    /// True for failures of a numerical method on otherwise valid input.
    bool is_numerical() const noexcept {
        return code_ != ErrorCode::DomainError && code_ != ErrorCode::GridMismatch &&
               code_ != ErrorCode::SupportViolation;
    }

private:
    ErrorCode code_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const char* message) {
    if (!condition) fail(code, message);
}

}  // namespace detail

}  // namespace efx
