#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tbsim {

enum class ErrorCode {
    // hashing / merkle
    EmptyRandomness,
    EmptyLeaves,
    IndexOutOfRange,
    // stepvm
    NonTermination,
    InvalidOpcode,
    FaultBeyondTrace,
    InvalidFault,
    // verification game
    NoDisagreement,
    MissingCommitment,
    WrongPhase,
    // protocol engine
    KTooSmall,
    InsufficientFunds,
    InsufficientSolvers,
    InsufficientStake,
    NotSelected,
    NotEligible,
    DeadlinePassed,
    PhaseClosed,
    UnknownAccount,
    UnknownTask,
    DuplicateSubmission,
    // analytics / cli
    InvalidQuery,
    ConfigInvalid,
    InvariantViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace tbsim
