#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace itc {

enum class ErrorCode {
    IntegrationDiverged,   // non-finite state during integration
    BracketInvalid,        // bisection bracket endpoints share a sign
    NotHurwitz,            // Lyapunov equation has no SPD solution
    OutOfWindow,           // performance spec queried before its reset time
    MonotonicityViolated,  // V increased across an on-phase
    PerformanceViolated,   // S(t) <= V(x(t)) where the scheme requires strictness
    BoundaryContact,       // omega(h) <= 0 at an off event
    InfeasibleConstraint,  // min-norm QP constraint cannot be met
    DomainError,           // state outside the model's domain (e.g. r <= 0)
    OutsideSafeSet,        // initial condition with h(x0) < 0
    NoEvent,               // closed-form oracle has no event
    EmptyTrajectory,       // metrics of an empty trajectory
    InvalidArgument,       // rejected precondition or config value
    MalformedArtifact,     // unreadable trajectory/event files
};

[[nodiscard]] const char* to_string(ErrorCode code);

/// Library-wide exception. `when()` carries the simulation time at which the
/// failure occurred where that is meaningful (NaN otherwise).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, double when = std::nan(""))
        : std::runtime_error(what), code_(code), when_(when) {}

    [[nodiscard]] ErrorCode code() const { return code_; }
    [[nodiscard]] double when() const { return when_; }

private:
    ErrorCode code_;
    double when_;
};

}  // namespace itc
