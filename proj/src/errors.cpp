#include <tbsim/errors.hpp>

namespace tbsim {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::EmptyRandomness: return "EmptyRandomness";
    case ErrorCode::EmptyLeaves: return "EmptyLeaves";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonTermination: return "NonTermination";
    case ErrorCode::InvalidOpcode: return "InvalidOpcode";
    case ErrorCode::FaultBeyondTrace: return "FaultBeyondTrace";
    case ErrorCode::InvalidFault: return "InvalidFault";
    case ErrorCode::NoDisagreement: return "NoDisagreement";
    case ErrorCode::MissingCommitment: return "MissingCommitment";
    case ErrorCode::WrongPhase: return "WrongPhase";
    case ErrorCode::KTooSmall: return "KTooSmall";
    case ErrorCode::InsufficientFunds: return "InsufficientFunds";
    case ErrorCode::InsufficientSolvers: return "InsufficientSolvers";
    case ErrorCode::InsufficientStake: return "InsufficientStake";
    case ErrorCode::NotSelected: return "NotSelected";
    case ErrorCode::NotEligible: return "NotEligible";
    case ErrorCode::DeadlinePassed: return "DeadlinePassed";
    case ErrorCode::PhaseClosed: return "PhaseClosed";
    case ErrorCode::UnknownAccount: return "UnknownAccount";
    case ErrorCode::UnknownTask: return "UnknownTask";
    case ErrorCode::DuplicateSubmission: return "DuplicateSubmission";
    case ErrorCode::InvalidQuery: return "InvalidQuery";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

}  // namespace tbsim
