#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dtpt {

enum class ErrorCode {
    invalid_spec,
    too_few_modes,
    step_too_small,
    insufficient_sizes,
    degenerate_fit,
    annulus_empty,
    low_quality_fit,
    window_missing,
    no_critical_point,
    config_parse,
    io
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_spec: return "invalid-spec";
    case ErrorCode::too_few_modes: return "too-few-modes";
    case ErrorCode::step_too_small: return "step-too-small";
    case ErrorCode::insufficient_sizes: return "insufficient-sizes";
    case ErrorCode::degenerate_fit: return "degenerate-fit";
    case ErrorCode::annulus_empty: return "annulus-empty";
    case ErrorCode::low_quality_fit: return "low-quality-fit";
    case ErrorCode::window_missing: return "window-missing";
    case ErrorCode::no_critical_point: return "no-critical-point";
    case ErrorCode::config_parse: return "config-parse";
    case ErrorCode::io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(to_string(code)) + ": " + msg), m_code(code) {}

    ErrorCode code() const noexcept { return m_code; }

private:
    ErrorCode m_code;
};

}  // namespace dtpt
