#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seamcheck {

enum class ErrorKind {
    MalformedFile,
    UnsupportedFormat,
    InvalidArgument,
    KernelTooLarge,
    DegenerateHistogram,
    EmptyImage,
    NoSupport,
    PathOutsideImage,
    OverlappingBands,
    ConfigInvalid,
    SpecInvalid,
    Io,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::MalformedFile: return "MalformedFile";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::KernelTooLarge: return "KernelTooLarge";
    case ErrorKind::DegenerateHistogram: return "DegenerateHistogram";
    case ErrorKind::EmptyImage: return "EmptyImage";
    case ErrorKind::NoSupport: return "NoSupport";
    case ErrorKind::PathOutsideImage: return "PathOutsideImage";
    case ErrorKind::OverlappingBands: return "OverlappingBands";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::SpecInvalid: return "SpecInvalid";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

/// Exception carrying a machine-checkable kind next to the message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace seamcheck
