#pragma once

#include <utility>

#include "itc/certificates.hpp"
#include "itc/numerics.hpp"
#include "itc/triggers.hpp"
#include "itc/types.hpp"

namespace itc::spacecraft {

/// Cylindrical-coordinate spacecraft state relative to the desired orbital
/// plane. Packs to/from the flat engine state in the order
/// (r, theta, z, r_dot, theta_dot, z_dot).
struct CylState {
    double r = 0.0;
    double theta = 0.0;
    double z = 0.0;
    double r_dot = 0.0;
    double theta_dot = 0.0;
    double z_dot = 0.0;

    [[nodiscard]] static CylState from_state(const State& x);
    [[nodiscard]] State to_state() const;
};

struct OrbitParams {
    double mu = 1.0;      // gravitational parameter
    double r_des = 1.0;   // desired circular-orbit radius
    double theta0 = 0.0;  // phase offset of the reference angle
    double r_min = 0.1;   // crash radius; trajectories must keep r > r_min

    /// Mean motion of the reference orbit, sqrt(mu / r_des^3).
    [[nodiscard]] double omega_ref() const;
    void validate() const;
};

/// Double-integrator pair of the linearized output dynamics plus the gain,
/// cost, and Lyapunov matrices. A+BK is Hurwitz by construction and P solves
/// (A+BK)^T P + P(A+BK) = -Q.
struct GainMatrices {
    Matrix a;  // 6x6
    Matrix b;  // 6x3
    Matrix k;  // 3x6
    Matrix q;  // 6x6 SPD
    Matrix p;  // 6x6 SPD
    double q_min_eig = 0.0;  // smallest eigenvalue of Q
};

/// Newtonian point-mass dynamics in cylindrical coordinates. Throws
/// Error(DomainError) for r <= 0.
[[nodiscard]] State dynamics(const CylState& x, const Input& u, const OrbitParams& params);

/// Tracking output and its rate stacked as eta = (y, ydot):
/// y = (r - r_des, theta - (theta0 + omega_ref * t), z).
[[nodiscard]] State output_eta(const CylState& x, double t, const OrbitParams& params);

/// Output-dynamics drift and decoupling matrix: ydotdot = drift + D u with
/// D = diag(1, 1/r, 1). Throws Error(DomainError) for r <= 0.
[[nodiscard]] std::pair<State, Matrix> decoupling(const CylState& x, const OrbitParams& params);

/// Feedback-linearizing input u = D^{-1} (-drift + v); substituting back
/// yields ydotdot = v exactly.
[[nodiscard]] Input fl_input(const CylState& x, const State& v, const OrbitParams& params);

/// K = [-kp I, -kd I], giving per-axis closed-loop polynomial
/// s^2 + kd s + kp; P from the CTLE with the given SPD Q. Requires
/// kp > 0, kd > 0.
[[nodiscard]] GainMatrices design_gains(double kp, double kd, const Matrix& q);

/// V = eta^T P eta and its exact rate under input u.
[[nodiscard]] std::pair<double, double> clf_value_and_rate(const CylState& x, const Input& u,
                                                           double t, const GainMatrices& gains,
                                                           const OrbitParams& params);

/// Min-norm input meeting Vdot(x, u, t) <= -eta^T Q eta. A QP singularity
/// (zero input direction with positive offset) is surfaced as
/// Error(InfeasibleConstraint) with state context.
[[nodiscard]] Input controller(const CylState& x, double t, const GainMatrices& gains,
                               const OrbitParams& params);

/// Everything the sim engine needs to run the spacecraft scenario: the
/// guarded vector field, the QP controller, and the ISS certificate whose
/// decay term is the exact quadratic form eta^T Q eta.
struct Scenario {
    ControlledField field;
    Controller controller;
    IssCertificate cert;
    OrbitParams params;
    GainMatrices gains;
};

/// Assemble the trigger bundle. The field closure enforces the r > r_min
/// crash guard.
[[nodiscard]] Scenario make_scenario(const GainMatrices& gains, const OrbitParams& params);

/// Reference (nominal-orbit) state at time t: eta(x_ref(t), t) = 0.
[[nodiscard]] State reference_state(double t, const OrbitParams& params);

}  // namespace itc::spacecraft
