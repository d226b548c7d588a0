#include "dualwin/error.hpp"

namespace dualwin {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid-argument";
        case ErrorCode::scene_invalid: return "scene-invalid";
        case ErrorCode::sampler_exhausted: return "sampler-exhausted";
        case ErrorCode::detector_degenerate: return "detector-degenerate";
        case ErrorCode::internal_invariant: return "internal-invariant";
        case ErrorCode::io_failure: return "io-failure";
    }
    return "unknown";
}

}  // namespace dualwin
