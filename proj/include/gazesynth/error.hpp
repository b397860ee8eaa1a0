#pragma once

#include <stdexcept>
#include <string>

namespace gazesynth {

enum class ErrorCode {
    InvalidArgument,
    BehindCamera,
    DegenerateLandmarks,
    MalformedLandmarks,
    DegenerateConfiguration,
    FaceBehindCamera,
    ProfileDegenerate,
    SelfIntersectingOutline,
    SamplerExhausted,
    Parse,
    Io,
    Config,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; `code()` distinguishes the failure class.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace gazesynth
