#pragma once

#include <stdexcept>
#include <string>

namespace dualwin {

enum class ErrorCode {
    invalid_argument,
    scene_invalid,
    sampler_exhausted,
    detector_degenerate,
    internal_invariant,
    io_failure,
};

const char* to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace dualwin
