#include "hsom/error.hpp"

namespace hsom {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DegenerateBasis: return "DegenerateBasis";
    case ErrorCode::ZeroReference: return "ZeroReference";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::ChannelMismatch: return "ChannelMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyTrace: return "EmptyTrace";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace hsom
