#pragma once

#include "itc/types.hpp"

namespace itc {

/// Single affine input constraint p + q . u <= 0.
struct AffineConstraint {
    double p = 0.0;
    Input q;
};

/// Pointwise min-norm input subject to one affine constraint, in closed form:
/// u = 0 when the constraint already holds at zero, otherwise the projection
/// u = -(p / ||q||^2) q, which meets the constraint with equality. Throws
/// Error(InfeasibleConstraint) when q = 0 and p > 0.
[[nodiscard]] Input min_norm_qp(const AffineConstraint& c);

/// Input sampled and frozen at a phase start, for use over [t_on, t_off).
struct HeldInput {
    Input u;
    State x_sample;
    double t_sample = 0.0;
};

/// Freeze controller(x_sample, t_sample).
[[nodiscard]] HeldInput held_input(const Controller& controller, const State& x_sample,
                                   double t_sample);

}  // namespace itc
