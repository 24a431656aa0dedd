#pragma once

#include <stdexcept>
#include <string>

namespace seapass {

enum class ErrorKind {
    ZeroPolynomial,
    NotSimplePole,
    NotAPole,
    InvalidArgument,
    InvalidTarget,
    EvalAtPole,
    InsufficientSpan,
    Infeasible,
    UnknownScenario,
    Config,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
        case ErrorKind::NotSimplePole: return "NotSimplePole";
        case ErrorKind::NotAPole: return "NotAPole";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::InvalidTarget: return "InvalidTarget";
        case ErrorKind::EvalAtPole: return "EvalAtPole";
        case ErrorKind::InsufficientSpan: return "InsufficientSpan";
        case ErrorKind::Infeasible: return "Infeasible";
        case ErrorKind::UnknownScenario: return "UnknownScenario";
        case ErrorKind::Config: return "Config";
    }
    return "Unknown";
}

/// Exception carrying a machine-checkable kind next to the message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace seapass
