#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace selmer {

enum class Errc {
    SingularModel,
    NonRational,
    NotIntegralAt,
    PrimeTooLarge,
    SingularCurve,
    EvenOrCompositeP,
    SignLengthMismatch,
    HypothesisFailure,
    NonPPower,
    TooManySigns,
    NonFiniteInvariants,
    PrecisionExhausted,
    SchemaViolation,
    InvalidArgument,
};

std::string_view errc_name(Errc code) noexcept;

// Every recoverable failure in the library is reported through this type;
// `code()` identifies the failure class, `what()` carries the detail.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace selmer
