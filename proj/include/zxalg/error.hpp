#pragma once

#include <stdexcept>
#include <string>

namespace zxalg {

enum class ErrorCode {
    IllegalArity,
    ArityMismatch,
    InexactParameter,
    CapacityExceeded,
    ShapeMismatch,
    ZeroReference,
    SideConditionViolated,
    MissingParameter,
    StaleEmbedding,
    Degenerate,
    Parse,
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::IllegalArity: return "IllegalArity";
        case ErrorCode::ArityMismatch: return "ArityMismatch";
        case ErrorCode::InexactParameter: return "InexactParameter";
        case ErrorCode::CapacityExceeded: return "CapacityExceeded";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::ZeroReference: return "ZeroReference";
        case ErrorCode::SideConditionViolated: return "SideConditionViolated";
        case ErrorCode::MissingParameter: return "MissingParameter";
        case ErrorCode::StaleEmbedding: return "StaleEmbedding";
        case ErrorCode::Degenerate: return "Degenerate";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace zxalg
