#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hsom {

enum class ErrorCode {
    MalformedFile,
    EmptyFile,
    DegenerateSplit,
    InvalidSpec,
    DegenerateBasis,
    ZeroReference,
    UnknownClass,
    TooShort,
    ChannelMismatch,
    DimensionMismatch,
    EmptyInput,
    EmptyTrace,
    EmptySet,
    ZeroVector,
    ConfigMismatch,
    EmptyCorpus,
    VersionMismatch,
    CorruptFile,
    InvalidArgument,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (and tests) can branch on the category instead of the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& what);

} // namespace hsom
