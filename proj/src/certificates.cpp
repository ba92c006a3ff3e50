#include "itc/certificates.hpp"

#include <cmath>
#include <string>

#include "itc/errors.hpp"

namespace itc {

IssCertificate make_autonomous_certificate(std::function<double(const State&)> v,
                                           std::function<State(const State&)> grad_v,
                                           ClassKFn alpha, ClassKFn gamma) {
    IssCertificate cert{
        .value = [v = std::move(v)](const State& x, double) { return v(x); },
        .grad = [g = std::move(grad_v)](const State& x, double) { return g(x); },
        .partial_t = {},
        .alpha = alpha,
        .gamma = gamma,
        .alpha_term = {},
        .alpha_lo = std::nullopt,
        .alpha_hi = std::nullopt,
    };
    return cert;
}

double lie_derivative_V(const ControlledField& system, const IssCertificate& cert, const State& x,
                        const Input& u, double t) {
    double rate = dot(cert.grad(x, t), system(x, u, t));
    if (cert.partial_t) rate += cert.partial_t(x, t);
    return rate;
}

std::pair<double, double> perf_eval(const PerformanceSpec& spec, double t) {
    if (t < spec.t_reset) {
        throw Error(ErrorCode::OutOfWindow,
                    "perf_eval: t = " + std::to_string(t) + " precedes reset time " +
                        std::to_string(spec.t_reset),
                    t);
    }
    const double s = spec.s0 * std::exp(-spec.lambda * (t - spec.t_reset));
    return {s, -spec.lambda * s};
}

PerformanceSpec perf_reset(double v_on, double v_off, double t_off, double lambda) {
    if (v_off > v_on) {
        throw Error(ErrorCode::MonotonicityViolated,
                    "perf_reset: V at t_off (" + std::to_string(v_off) +
                        ") exceeds V at t_on (" + std::to_string(v_on) + ")",
                    t_off);
    }
    return PerformanceSpec{.s0 = 0.5 * (v_on + v_off), .lambda = lambda, .t_reset = t_off};
}

double barrier_rate(const BarrierCertificate& cert, const State& x, const State& e, double t) {
    return cert.hdot(x, e, t);
}

}  // namespace itc
