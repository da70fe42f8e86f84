#pragma once

#include <stdexcept>
#include <string>

namespace btz {

enum class ErrorCode {
    // malformed or out-of-domain input
    InvalidVector,
    InvalidInput,
    UnknownGenerator,
    InvalidTriangulation,
    InvalidProfile,
    // mathematical failures
    InvalidIsometry,
    NotParabolic,
    NoFixedPoints,
    AlphaZero,
    NotInImage,
    NotUnimodular,
    InvalidRepresentation,
    DecorationFailure,
    KappaSearchExhausted,
    NonMonotoneAngles,
    SpearNotFound,
    MSearchExhausted,
    OnSeam,
    NotCausal,
    Tangency,
    SearchInconclusive,
    DecompositionViolation,
};

const char* error_name(ErrorCode code);

/// Input errors map to CLI exit code 2, everything else to 1.
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace btz
