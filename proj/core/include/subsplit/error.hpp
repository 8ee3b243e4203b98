#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace subsplit {

enum class ErrorCode {
    kDimensionMismatch,
    kInvalidArgument,
    kNonFinite,
    kNoConvergence,
    kDegenerate,
    kInconsistentAffine,
    kParse,
    kIo,
};

std::string_view to_string(ErrorCode code);

/// Every failure the library reports carries one of the codes above so the
/// CLI and tests can branch on the kind without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kNonFinite: return "non-finite";
    case ErrorCode::kNoConvergence: return "no-convergence";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kInconsistentAffine: return "inconsistent-affine";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kIo: return "io";
    }
    return "unknown";
}

}  // namespace subsplit
