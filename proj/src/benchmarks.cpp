#include "itc/benchmarks.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "itc/errors.hpp"

namespace itc::benchmarks {

ScalarStabScenario make_scalar_stab() {
    ScalarStabScenario s;
    s.field = [](const State&, const Input& u, double) { return State{u[0]}; };
    s.controller = [](const State& x, double) { return Input{-x[0]}; };
    s.cert = make_autonomous_certificate(
        [](const State& x) { return 0.5 * x[0] * x[0]; },
        [](const State& x) { return State{x[0]}; },
        ClassKFn(0.5, 2.0), ClassKFn(0.5, 2.0));
    s.config.sigma = 0.5;
    s.config.t_max = 0.5;
    s.config.lambda = 0.1;
    s.config.kappa = 2.0;
    s.config.c_min = 0.01;
    s.x0 = State{1.0};
    return s;
}

namespace {
constexpr double kDrift = 0.5;
constexpr double kGain = 2.0;        // k(x) = -kGain * x
constexpr double kOmegaSlope = 4.0;  // omega(s) = iota(s) = 4s
constexpr double kMarginD = 3.0;
}  // namespace

ScalarSafetyScenario make_scalar_safety() {
    ScalarSafetyScenario s;
    s.drift = kDrift;
    s.field = [](const State&, const Input& u, double) { return State{kDrift + u[0]}; };
    s.controller = [](const State& x, double) { return Input{-kGain * x[0]}; };
    s.barrier = BarrierCertificate{
        .h = [](const State& x, double) { return 1.0 - x[0] * x[0]; },
        .hdot =
            [](const State& x, const State& e, double) {
                // dh/dx . f(x, k(x+e)) with k(x) = -2x.
                return -2.0 * x[0] * (kDrift - kGain * (x[0] + e[0]));
            },
        .omega = ClassKFn(kOmegaSlope, 1.0),
        .iota = ClassKFn(kOmegaSlope, 1.0),
        .d = kMarginD,
        .theta = 0.5,
    };
    s.config.theta = 0.5;
    s.config.kappa = 2.0;
    s.config.c_min = 0.25;
    s.config.t_max = std::numeric_limits<double>::infinity();
    s.x0 = State{0.5};
    return s;
}

double stab_oracle_next_on(double x_off, double v_on, double lambda, double c_beta) {
    const double v_off = 0.5 * x_off * x_off;
    const double s0 = 0.5 * (v_on + v_off);
    if (!(c_beta > lambda)) {
        throw Error(ErrorCode::NoEvent, "stab_oracle_next_on: requires c_beta > lambda");
    }
    if (lambda == 0.0) return std::numeric_limits<double>::infinity();
    if (!(v_off > 0.0)) {
        throw Error(ErrorCode::NoEvent, "stab_oracle_next_on: V_off must be positive");
    }
    const double duration = (1.0 / lambda) * std::log(s0 * (c_beta - lambda) / (c_beta * v_off));
    if (!(duration > 0.0)) {
        throw Error(ErrorCode::NoEvent,
                    "stab_oracle_next_on: degenerate reset, no on event (duration = " +
                        std::to_string(duration) + ")");
    }
    return duration;
}

SafetyCycle safety_oracle_cycle(double x0, double theta, double c_min) {
    if (!(std::abs(x0) < 1.0)) {
        throw Error(ErrorCode::OutsideSafeSet, "safety_oracle_cycle: |x0| must be < 1");
    }
    const double kappa = 2.0;
    SafetyCycle cycle;

    // On phase: held input u = -2*x0, constant rate rho = w - 2*x0. The
    // residual along the flow is -4x^2 - 2*rho*x + (4 - 3*theta).
    const double rho = kDrift - kGain * x0;
    if (rho == 0.0) {
        throw Error(ErrorCode::NoEvent, "safety_oracle_cycle: held flow is frozen, no off event");
    }
    const double disc = std::sqrt(rho * rho + 4.0 * (kOmegaSlope - kMarginD * theta));
    cycle.x_off = rho > 0.0 ? (-rho + disc) / 4.0 : (-rho - disc) / 4.0;
    cycle.t_off = (cycle.x_off - x0) / rho;

    // Off event data under zero input: hdot = -2*x*w = -x for w = 0.5.
    const double hdot_off = -2.0 * cycle.x_off * kDrift;
    const double omega_h = kOmegaSlope * (1.0 - cycle.x_off * cycle.x_off);
    cycle.c_beta = std::max(kappa * (-hdot_off / omega_h), c_min);

    // Off phase: drift at w toward the positive root of
    // 4*c_beta*x^2 + x - 4*c_beta = 0 (residual -x + 4*c_beta*(1 - x^2)).
    const double a = kOmegaSlope * cycle.c_beta;
    cycle.x_on = (-1.0 + std::sqrt(1.0 + 4.0 * a * a)) / (2.0 * a);
    cycle.t_on = cycle.t_off + (cycle.x_on - cycle.x_off) / kDrift;
    return cycle;
}

}  // namespace itc::benchmarks
