#include "itc/errors.hpp"

namespace itc {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::IntegrationDiverged: return "integration-diverged";
        case ErrorCode::BracketInvalid: return "bracket-invalid";
        case ErrorCode::NotHurwitz: return "not-hurwitz";
        case ErrorCode::OutOfWindow: return "out-of-window";
        case ErrorCode::MonotonicityViolated: return "monotonicity-violated";
        case ErrorCode::PerformanceViolated: return "performance-violated";
        case ErrorCode::BoundaryContact: return "boundary-contact";
        case ErrorCode::InfeasibleConstraint: return "infeasible-constraint";
        case ErrorCode::DomainError: return "domain-error";
        case ErrorCode::OutsideSafeSet: return "outside-safe-set";
        case ErrorCode::NoEvent: return "no-event";
        case ErrorCode::EmptyTrajectory: return "empty-trajectory";
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::MalformedArtifact: return "malformed-artifact";
    }
    return "unknown";
}

}  // namespace itc
