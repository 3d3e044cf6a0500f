#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spinnet {

/// Every failure the library reports. Selection-rule violations are not
/// errors; they evaluate to an exact zero.
enum class ErrorKind {
    MalformedSpin,
    RadicandMismatch,
    DivisionByZero,
    SizeExceeded,
    NotConnected,
    NotClosed,
    DegenerateGeometry,
    OutOfRange,
    InvalidParams,
    NonFinitePotential,
    UnsupportedFormat,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::MalformedSpin: return "MalformedSpin";
    case ErrorKind::RadicandMismatch: return "RadicandMismatch";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::SizeExceeded: return "SizeExceeded";
    case ErrorKind::NotConnected: return "NotConnected";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::NonFinitePotential: return "NonFinitePotential";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

} // namespace spinnet
