#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "itc/numerics.hpp"
#include "itc/types.hpp"

namespace itc {

/// ISS Lyapunov certificate. `value` and `grad` may depend on time (the
/// spacecraft certificate tracks a moving reference); `partial_t` carries the
/// explicit time derivative and is empty for autonomous certificates.
///
/// `alpha_term` is the decay term the off trigger subtracts from: it defaults
/// to alpha(||x||) and scenarios may override it with an exact quadratic form.
/// `gamma` is the ISS error gain; it is optional because some scenarios have
/// no tractable gamma and it is only consulted by validation sweeps.
struct IssCertificate {
    StateTimeFn value;                                    // V(x, t)
    std::function<State(const State&, double)> grad;      // dV/dx
    StateTimeFn partial_t;                                // dV/dt (explicit), may be empty
    ClassKFn alpha;                                       // decay comparison function
    std::optional<ClassKFn> gamma;                        // error gain comparison function
    StateTimeFn alpha_term;                               // decay term used in residuals
    std::optional<ClassKFn> alpha_lo;                     // sandwich bounds, validation only
    std::optional<ClassKFn> alpha_hi;

    [[nodiscard]] double decay_term(const State& x, double t) const {
        return alpha_term ? alpha_term(x, t) : alpha.eval(norm(x));
    }
};

/// Autonomous certificate from V, its gradient, and comparison functions.
[[nodiscard]] IssCertificate make_autonomous_certificate(
    std::function<double(const State&)> v, std::function<State(const State&)> grad_v,
    ClassKFn alpha, ClassKFn gamma);

/// Exponentially decaying performance specification, reset at t_reset:
/// S(t) = s0 * exp(-lambda * (t - t_reset)).
struct PerformanceSpec {
    double s0 = 0.0;       // value at the last reset
    double lambda = 0.0;   // decay rate, >= 0 (0 means a constant spec)
    double t_reset = 0.0;  // time of the last reset
};

/// Exact V-dot under applied input u: grad V . f(x, u, t) + dV/dt.
[[nodiscard]] double lie_derivative_V(const ControlledField& system, const IssCertificate& cert,
                                      const State& x, const Input& u, double t);

/// (S(t), dS/dt). Throws Error(OutOfWindow) for t < t_reset.
[[nodiscard]] std::pair<double, double> perf_eval(const PerformanceSpec& spec, double t);

/// Midpoint reset rule: s0 = (V_on + V_off) / 2 at t_off. Requires
/// V_on >= V_off (the on-phase decreased V); throws
/// Error(MonotonicityViolated) otherwise. V_on = V_off = 0 yields the
/// terminal spec s0 = 0.
[[nodiscard]] PerformanceSpec perf_reset(double v_on, double v_off, double t_off, double lambda);

/// Barrier certificate with the strong input-to-state safety data.
/// `hdot` evaluates the exact barrier rate along the implemented closed loop:
/// dh/dt + dh/dx . f(x, k(x + e)), with e the held error (e = -x when the
/// controller is off).
struct BarrierCertificate {
    StateTimeFn h;                                                  // h(x, t)
    std::function<double(const State&, const State&, double)> hdot; // hdot(x, e, t)
    ClassKFn omega;
    ClassKFn iota;
    double d = 0.0;      // robustness margin, > 0
    double theta = 0.5;  // off-trigger margin, in (0, 1)
};

/// Exact barrier rate under held error e.
[[nodiscard]] double barrier_rate(const BarrierCertificate& cert, const State& x, const State& e,
                                  double t);

}  // namespace itc
