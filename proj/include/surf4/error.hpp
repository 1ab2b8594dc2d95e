#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace surf4 {

enum class ErrorCode {
    RankDeficient,
    Degenerate,
    FDFailure,
    OutOfDomain,
    SuperConformal,
    NotGeneralType,
    NotSemiCanonical,
    LemmaViolated,
    LeftDomain,
    GridTooSmall,
    DegenerateInvariants,
    DomainError,
    BranchBreak,
    CompatibilityRejected,
    DriftExceeded,
    ClosureExceeded,
    NotUnitSpeed,
    CircleDegenerate,
    IrregularProfile,
    PreconditionFailed,
    ParseError,
    IOError,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library is reported through this exception; the code
/// identifies which contract was violated.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace surf4
