#include "itc/triggers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "itc/errors.hpp"

namespace itc {

namespace {

void require(bool ok, const char* field, const char* constraint) {
    if (!ok) {
        throw Error(ErrorCode::InvalidArgument,
                    std::string("TriggerConfig: ") + field + " must satisfy " + constraint);
    }
}

}  // namespace

void TriggerConfig::validate() const {
    require(sigma > 0.0 && sigma < 1.0, "sigma", "0 < sigma < 1");
    require(t_max > 0.0, "t_max", "t_max > 0");
    require(lambda >= 0.0, "lambda", "lambda >= 0");
    require(kappa > 1.0, "kappa", "kappa > 1");
    require(c_min > 0.0, "c_min", "c_min > 0");
    require(theta > 0.0 && theta < 1.0, "theta", "0 < theta < 1");
    if (!std::isnan(eps_term)) require(eps_term > 0.0, "eps_term", "eps_term > 0");
    if (!std::isnan(tol_inv)) require(tol_inv > 0.0, "tol_inv", "tol_inv > 0");
}

double off_residual(const IssCertificate& cert, const ControlledField& system,
                    const Controller& controller, const PhaseState& phase, const State& x,
                    double t, double sigma) {
    const Input u_held = controller(phase.x_held, phase.t_phase_start);
    const double lfv = lie_derivative_V(system, cert, x, u_held, t);
    return lfv + (1.0 - sigma) * cert.decay_term(x, t);
}

double on_residual(const IssCertificate& cert, const PerformanceSpec& spec,
                   const ControlledField& system, const PhaseState& phase, const State& x,
                   double t) {
    const double lfv = lie_derivative_V(system, cert, x, zero_input(phase.input_dim), t);
    const auto [s, dsdt] = perf_eval(spec, t);
    return lfv - dsdt - phase.c_beta * (s - cert.value(x, t));
}

double select_c_beta(double lfv_at_off, double dsdt_at_off, double s_at_off, double v_at_off,
                     double kappa, double c_min, double lambda) {
    if (!(s_at_off > v_at_off)) {
        throw Error(ErrorCode::PerformanceViolated,
                    "select_c_beta: S(t_off) = " + std::to_string(s_at_off) +
                        " does not exceed V(t_off) = " + std::to_string(v_at_off));
    }
    const double bound = (lfv_at_off - dsdt_at_off) / (s_at_off - v_at_off);
    // kappa * lambda keeps the on event solvable when V is frozen while off.
    return std::max({kappa * bound, c_min, kappa * lambda});
}

double safe_off_residual(const BarrierCertificate& cert, const PhaseState& phase, const State& x,
                         double t) {
    const State e = held_error(phase, x);
    return barrier_rate(cert, x, e, t) + cert.omega.eval(cert.h(x, t)) - cert.theta * cert.d;
}

double safe_on_residual(const BarrierCertificate& cert, const PhaseState& phase, const State& x,
                        double t) {
    const State e = held_error(phase, x);
    return barrier_rate(cert, x, e, t) + phase.c_beta * cert.omega.eval(cert.h(x, t));
}

double select_c_beta_safety(double hdot_at_off, double omega_h_at_off, double kappa,
                            double c_min) {
    if (!(omega_h_at_off > 0.0)) {
        throw Error(ErrorCode::BoundaryContact,
                    "select_c_beta_safety: omega(h) = " + std::to_string(omega_h_at_off) +
                        " at the off event; state is on the safe-set boundary");
    }
    const double bound = -hdot_at_off / omega_h_at_off;
    return std::max(kappa * bound, c_min);
}

State held_error(const PhaseState& phase, const State& x) {
    State e(x.size());
    if (phase.mode == Mode::On) {
        for (std::size_t i = 0; i < x.size(); ++i) e[i] = phase.x_held[i] - x[i];
    } else {
        for (std::size_t i = 0; i < x.size(); ++i) e[i] = -x[i];
    }
    return e;
}

}  // namespace itc
