#pragma once

#include "itc/certificates.hpp"
#include "itc/triggers.hpp"
#include "itc/types.hpp"

namespace itc::benchmarks {

/// Scalar stabilization benchmark: xdot = u, k(x) = -x, V = x^2/2 with
/// alpha(s) = gamma(s) = s^2/2. The ISS inequality holds identically:
/// -x(x+e) <= -x^2/2 + e^2/2.
struct ScalarStabScenario {
    ControlledField field;
    Controller controller;
    IssCertificate cert;
    TriggerConfig config;
    State x0;
};

/// Preset constants: sigma = 0.5, T_max = 0.5, lambda = 0.1, kappa = 2,
/// c_min = 0.01, x0 = 1.
[[nodiscard]] ScalarStabScenario make_scalar_stab();

/// Scalar safety benchmark: xdot = w + u with drift w = 0.5, k(x) = -2x,
/// h = 1 - x^2 with omega(s) = iota(s) = 4s, d = 3. The drift makes the
/// off-phase nontrivial; w = 0.5 completes one full cycle within t = 5.
struct ScalarSafetyScenario {
    ControlledField field;
    Controller controller;
    BarrierCertificate barrier;
    TriggerConfig config;
    State x0;
    double drift = 0.5;
};

/// Preset constants: theta = 0.5, kappa = 2, c_min = 0.25, T_max = inf,
/// x0 = 0.5.
[[nodiscard]] ScalarSafetyScenario make_scalar_safety();

/// Closed-form duration of an off interval of the scalar stabilization
/// benchmark (the off-phase dynamics freeze x, so V stays at x_off^2/2):
/// the exact solution of lambda*S(t) = c_beta*(S(t) - V_off) with
/// s0 = (V_on + V_off)/2, namely (1/lambda) * ln(s0*(c_beta - lambda) /
/// (c_beta * V_off)). Returns +inf for lambda = 0. Throws Error(NoEvent)
/// when c_beta <= lambda or when the formula yields a non-positive duration
/// (degenerate midpoint reset).
[[nodiscard]] double stab_oracle_next_on(double x_off, double v_on, double lambda, double c_beta);

/// One full on/off cycle of the scalar safety benchmark from a fresh sample
/// at x0, by quadratic-root oracles: the off event solves the held-flow
/// residual and the on event solves x^2 + ... = 0 along the drift, with
/// times from the constant-rate linear flows.
struct SafetyCycle {
    double t_off = 0.0;
    double x_off = 0.0;
    double c_beta = 0.0;
    double t_on = 0.0;
    double x_on = 0.0;
};

[[nodiscard]] SafetyCycle safety_oracle_cycle(double x0, double theta = 0.5,
                                              double c_min = 0.25);

}  // namespace itc::benchmarks
