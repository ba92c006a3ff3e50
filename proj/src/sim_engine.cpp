#include "itc/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "itc/controllers.hpp"
#include "itc/errors.hpp"
#include "itc/numerics.hpp"

namespace itc {

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::ControllerOn: return "controller_on";
        case EventKind::ControllerOff: return "controller_off";
        case EventKind::TmaxCap: return "tmax_cap";
        case EventKind::Terminated: return "terminated";
    }
    return "unknown";
}

namespace {

// Residual as a function of (t, x) along the current phase's flow.
using PhaseResidual = std::function<double(double, const State&)>;

// Why a phase's integration loop stopped.
enum class StopReason { Trigger, Cap, Horizon, Terminated };

struct PhaseEnd {
    StopReason reason = StopReason::Horizon;
    double t = 0.0;
    State x;
};

struct EngineState {
    HybridTrajectory traj;
    double t = 0.0;
    State x;
    double bisection_tol = 1e-10;
};

void log_sample(EngineState& es, Mode mode, const Input& u, double cert, double spec) {
    es.traj.samples.push_back(Sample{es.t, es.x, mode, u, cert, spec});
}

// Integrate one phase with fixed steps, watching the residual for a sign
// change away from `healthy_negative` (stabilization residuals are negative
// while the phase persists; safety residuals are positive). Trigger events
// are localized by bisection over a single re-integrated partial step.
// `on_node` is called at every accepted node and may end the phase early by
// returning Terminated-stop; it also handles sample logging.
PhaseEnd integrate_phase(EngineState& es, const VectorField& field, const PhaseResidual& residual,
                         bool healthy_negative, double t_cap, double dt,
                         const std::function<bool(double, const State&)>& on_node) {
    auto healthy = [healthy_negative](double r) { return healthy_negative ? r < 0.0 : r > 0.0; };

    double r_prev = residual(es.t, es.x);
    if (!healthy(r_prev)) {
        throw Error(ErrorCode::DomainError,
                    "trigger residual has the terminal sign at a fresh sample (certificate "
                    "condition violated at t = " +
                        std::to_string(es.t) + ")",
                    es.t);
    }
    while (true) {
        if (es.t >= es.traj.t_final) return PhaseEnd{StopReason::Horizon, es.t, es.x};
        const double t_next = std::min({es.t + dt, t_cap, es.traj.t_final});
        const double h = t_next - es.t;
        State x_next = rk4_step(field, es.x, es.t, h);
        if (!all_finite(x_next)) {
            throw Error(ErrorCode::IntegrationDiverged,
                        "integration diverged; last valid time t = " + std::to_string(es.t), es.t);
        }
        const double r_next = residual(t_next, x_next);
        if (!std::isfinite(r_next)) {
            throw Error(ErrorCode::IntegrationDiverged,
                        "trigger residual went non-finite; last valid time t = " +
                            std::to_string(es.t),
                        es.t);
        }
        if (!healthy(r_next)) {
            // Localize the crossing inside [t, t_next].
            double t_star = t_next;
            if (r_next != 0.0) {
                const double t_base = es.t;
                const State x_base = es.x;
                auto g = [&](double tau) {
                    if (tau <= t_base) return r_prev;
                    return residual(tau, rk4_step(field, x_base, t_base, tau - t_base));
                };
                t_star = bisect_event(g, es.t, t_next, es.bisection_tol);
            }
            State x_star = t_star > es.t ? rk4_step(field, es.x, es.t, t_star - es.t) : es.x;
            es.t = t_star;
            es.x = std::move(x_star);
            const bool capped = t_star >= t_cap;
            return PhaseEnd{capped ? StopReason::Cap : StopReason::Trigger, es.t, es.x};
        }
        es.t = t_next;
        es.x = std::move(x_next);
        r_prev = r_next;
        if (es.t >= t_cap) return PhaseEnd{StopReason::Cap, es.t, es.x};
        if (on_node(es.t, es.x)) return PhaseEnd{StopReason::Terminated, es.t, es.x};
    }
}

}  // namespace

HybridTrajectory run_stabilization(const ControlledField& system, const Controller& controller,
                                   const IssCertificate& cert, const TriggerConfig& config,
                                   const State& x0, double t_final, double dt,
                                   double bisection_tol, HybridTrajectory* partial_sink) {
    config.validate();
    if (!(dt > 0.0) || !(t_final > 0.0) || !(bisection_tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "run_stabilization: dt, t_final, bisection_tol must be positive");
    }
    if (!all_finite(x0)) {
        throw Error(ErrorCode::InvalidArgument, "run_stabilization: x0 must be finite");
    }

    EngineState es;
    es.x = x0;
    es.bisection_tol = bisection_tol;
    es.traj.kind = RunKind::Stabilization;
    es.traj.dt = dt;
    es.traj.t_final = t_final;

    const double v0 = cert.value(x0, 0.0);
    es.traj.s0_initial = v0;
    const double eps_term = std::isnan(config.eps_term) ? 1e-9 * v0 : config.eps_term;
    const double tol_inv = std::isnan(config.tol_inv) ? 1e-6 * std::max(1.0, v0) : config.tol_inv;
    es.traj.eps_term = eps_term;
    es.traj.tol_inv = tol_inv;

    const std::size_t m = controller(x0, 0.0).size();
    const Input u_zero = zero_input(m);

    if (v0 <= eps_term) {
        es.traj.events.push_back(EventRecord{EventKind::Terminated, 0.0, x0, v0, v0, 0.0});
        log_sample(es, Mode::Off, u_zero, v0, v0);
        return es.traj;
    }

    // S on the first on-interval has no prior reset; log it as the constant
    // V(x0), which bounds V from above while the controller is on.
    PerformanceSpec spec{v0, 0.0, 0.0};
    PhaseState phase{Mode::On, 0.0, x0, 0.0, m};
    es.traj.events.push_back(EventRecord{EventKind::ControllerOn, 0.0, x0, v0, v0, 0.0});

    bool done = false;
    try {
    while (!done && es.t < t_final) {
        if (phase.mode == Mode::On) {
            const double v_on_entry = cert.value(es.x, es.t);
            const HeldInput held = held_input(controller, phase.x_held, phase.t_phase_start);
            auto field = [&](double tt, const State& xx) { return system(xx, held.u, tt); };
            auto resid = [&](double tt, const State& xx) {
                return off_residual(cert, system, controller, phase, xx, tt, config.sigma);
            };
            auto on_node = [&](double tt, const State& xx) {
                const double v = cert.value(xx, tt);
                const double s = perf_eval(spec, tt).first;
                if (v - s > es.traj.worst_on_dip) es.traj.worst_on_dip = v - s;
                if (v - s > tol_inv) es.traj.spec_dipped_during_on = true;
                log_sample(es, Mode::On, held.u, v, s);
                if (v <= eps_term) {
                    es.traj.events.push_back(EventRecord{EventKind::Terminated, tt, xx, v, s, 0.0});
                    return true;
                }
                return false;
            };
            log_sample(es, Mode::On, held.u, v_on_entry, perf_eval(spec, es.t).first);
            if (v_on_entry <= eps_term) {
                es.traj.events.push_back(
                    EventRecord{EventKind::Terminated, es.t, es.x, v_on_entry, spec.s0, 0.0});
                break;
            }
            const PhaseEnd end = integrate_phase(es, field, resid, /*healthy_negative=*/true,
                                                 phase.t_phase_start + config.t_max, dt, on_node);
            if (end.reason == StopReason::Horizon || end.reason == StopReason::Terminated) {
                done = true;
                break;
            }
            // Off event: reset the spec and pick c_beta for the coast.
            const double v_off = cert.value(es.x, es.t);
            if (v_off <= eps_term) {
                const double s_here = perf_eval(spec, es.t).first;
                es.traj.events.push_back(
                    EventRecord{EventKind::Terminated, es.t, es.x, v_off, s_here, 0.0});
                log_sample(es, Mode::Off, u_zero, v_off, s_here);
                break;
            }
            spec = perf_reset(v_on_entry, v_off, es.t, config.lambda);
            const auto [s_off, dsdt_off] = perf_eval(spec, es.t);
            const double lfv_off = lie_derivative_V(system, cert, es.x, u_zero, es.t);
            const double c_beta = select_c_beta(lfv_off, dsdt_off, s_off, v_off, config.kappa,
                                                config.c_min, config.lambda);
            const EventKind kind =
                end.reason == StopReason::Cap ? EventKind::TmaxCap : EventKind::ControllerOff;
            es.traj.events.push_back(EventRecord{kind, es.t, es.x, v_off, s_off, c_beta});
            phase = PhaseState{Mode::Off, es.t, State{}, c_beta, m};
        } else {
            auto field = [&](double tt, const State& xx) { return system(xx, u_zero, tt); };
            auto resid = [&](double tt, const State& xx) {
                return on_residual(cert, spec, system, phase, xx, tt);
            };
            auto on_node = [&](double tt, const State& xx) {
                const double v = cert.value(xx, tt);
                const double s = perf_eval(spec, tt).first;
                log_sample(es, Mode::Off, u_zero, v, s);
                if (v - s > tol_inv) {
                    throw Error(ErrorCode::PerformanceViolated,
                                "V exceeded S during an off interval at t = " + std::to_string(tt),
                                tt);
                }
                if (v <= eps_term) {
                    es.traj.events.push_back(EventRecord{EventKind::Terminated, tt, xx, v, s, 0.0});
                    return true;
                }
                return false;
            };
            log_sample(es, Mode::Off, u_zero, cert.value(es.x, es.t), perf_eval(spec, es.t).first);
            const PhaseEnd end =
                integrate_phase(es, field, resid, /*healthy_negative=*/true,
                                std::numeric_limits<double>::infinity(), dt, on_node);
            if (end.reason == StopReason::Horizon || end.reason == StopReason::Terminated) {
                done = true;
                break;
            }
            const double v_on = cert.value(es.x, es.t);
            const double s_on = perf_eval(spec, es.t).first;
            if (v_on <= eps_term) {
                es.traj.events.push_back(
                    EventRecord{EventKind::Terminated, es.t, es.x, v_on, s_on, 0.0});
                log_sample(es, Mode::Off, u_zero, v_on, s_on);
                break;
            }
            es.traj.events.push_back(
                EventRecord{EventKind::ControllerOn, es.t, es.x, v_on, s_on, 0.0});
            phase = PhaseState{Mode::On, es.t, es.x, 0.0, m};
        }
    }
    } catch (...) {
        if (partial_sink != nullptr) *partial_sink = std::move(es.traj);
        throw;
    }
    // An event landing exactly on the horizon leaves its boundary sample to
    // the phase that never starts; flush it here.
    if (!es.traj.samples.empty() && es.traj.samples.back().t < es.t) {
        const double v = cert.value(es.x, es.t);
        const double s = perf_eval(spec, es.t).first;
        if (phase.mode == Mode::On) {
            const HeldInput held = held_input(controller, phase.x_held, phase.t_phase_start);
            log_sample(es, Mode::On, held.u, v, s);
        } else {
            log_sample(es, Mode::Off, u_zero, v, s);
        }
    }
    return es.traj;
}

HybridTrajectory run_safety(const ControlledField& system, const Controller& controller,
                            const BarrierCertificate& barrier, const TriggerConfig& config,
                            const State& x0, double t_final, double dt, double bisection_tol,
                            HybridTrajectory* partial_sink) {
    config.validate();
    if (!(dt > 0.0) || !(t_final > 0.0) || !(bisection_tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "run_safety: dt, t_final, bisection_tol must be positive");
    }
    const double h0 = barrier.h(x0, 0.0);
    if (h0 < 0.0) {
        throw Error(ErrorCode::OutsideSafeSet,
                    "run_safety: h(x0, 0) = " + std::to_string(h0) + " < 0");
    }

    EngineState es;
    es.x = x0;
    es.bisection_tol = bisection_tol;
    es.traj.kind = RunKind::Safety;
    es.traj.dt = dt;
    es.traj.t_final = t_final;
    es.traj.s0_initial = h0;
    es.traj.eps_term = 0.0;
    es.traj.tol_inv =
        std::isnan(config.tol_inv) ? 1e-6 * std::max(1.0, h0) : config.tol_inv;

    const std::size_t m = controller(x0, 0.0).size();
    const Input u_zero = zero_input(m);

    PhaseState phase{Mode::On, 0.0, x0, 0.0, m};
    es.traj.events.push_back(EventRecord{EventKind::ControllerOn, 0.0, x0, h0, 0.0, 0.0});

    bool done = false;
    try {
    while (!done && es.t < t_final) {
        if (phase.mode == Mode::On) {
            const HeldInput held = held_input(controller, phase.x_held, phase.t_phase_start);
            auto field = [&](double tt, const State& xx) { return system(xx, held.u, tt); };
            auto resid = [&](double tt, const State& xx) {
                return safe_off_residual(barrier, phase, xx, tt);
            };
            auto on_node = [&](double tt, const State& xx) {
                log_sample(es, Mode::On, held.u, barrier.h(xx, tt), 0.0);
                return false;
            };
            log_sample(es, Mode::On, held.u, barrier.h(es.x, es.t), 0.0);
            const PhaseEnd end = integrate_phase(es, field, resid, /*healthy_negative=*/false,
                                                 phase.t_phase_start + config.t_max, dt, on_node);
            if (end.reason == StopReason::Horizon) break;
            const double h_off = barrier.h(es.x, es.t);
            const PhaseState off_probe{Mode::Off, es.t, State{}, 0.0, m};
            const double hdot_off = barrier_rate(barrier, es.x, held_error(off_probe, es.x), es.t);
            const double c_beta = select_c_beta_safety(hdot_off, barrier.omega.eval(h_off),
                                                       config.kappa, config.c_min);
            const EventKind kind =
                end.reason == StopReason::Cap ? EventKind::TmaxCap : EventKind::ControllerOff;
            es.traj.events.push_back(EventRecord{kind, es.t, es.x, h_off, 0.0, c_beta});
            phase = PhaseState{Mode::Off, es.t, State{}, c_beta, m};
        } else {
            auto field = [&](double tt, const State& xx) { return system(xx, u_zero, tt); };
            auto resid = [&](double tt, const State& xx) {
                return safe_on_residual(barrier, phase, xx, tt);
            };
            auto on_node = [&](double tt, const State& xx) {
                log_sample(es, Mode::Off, u_zero, barrier.h(xx, tt), 0.0);
                return false;
            };
            log_sample(es, Mode::Off, u_zero, barrier.h(es.x, es.t), 0.0);
            const PhaseEnd end =
                integrate_phase(es, field, resid, /*healthy_negative=*/false,
                                std::numeric_limits<double>::infinity(), dt, on_node);
            if (end.reason == StopReason::Horizon) break;
            const double h_on = barrier.h(es.x, es.t);
            es.traj.events.push_back(
                EventRecord{EventKind::ControllerOn, es.t, es.x, h_on, 0.0, 0.0});
            phase = PhaseState{Mode::On, es.t, es.x, 0.0, m};
        }
    }
    } catch (...) {
        if (partial_sink != nullptr) *partial_sink = std::move(es.traj);
        throw;
    }
    if (!es.traj.samples.empty() && es.traj.samples.back().t < es.t) {
        const double h = barrier.h(es.x, es.t);
        if (phase.mode == Mode::On) {
            const HeldInput held = held_input(controller, phase.x_held, phase.t_phase_start);
            log_sample(es, Mode::On, held.u, h, 0.0);
        } else {
            log_sample(es, Mode::Off, u_zero, h, 0.0);
        }
    }
    return es.traj;
}

Metrics compute_metrics(const HybridTrajectory& traj) {
    if (traj.samples.empty()) {
        throw Error(ErrorCode::EmptyTrajectory, "compute_metrics: trajectory has no samples");
    }
    const double t0 = traj.samples.front().t;
    const double t_end = traj.samples.back().t;
    const double horizon = t_end - t0;

    Metrics m;
    m.event_count = traj.events.size();

    double on_time = 0.0;
    double min_on = std::numeric_limits<double>::infinity();
    double min_off = std::numeric_limits<double>::infinity();
    double off_sum = 0.0;
    std::size_t off_count = 0;
    double open_on = std::numeric_limits<double>::quiet_NaN();
    double open_off = std::numeric_limits<double>::quiet_NaN();

    for (const EventRecord& e : traj.events) {
        switch (e.kind) {
            case EventKind::ControllerOn:
                if (!std::isnan(open_off)) {
                    const double d = e.time - open_off;
                    min_off = std::min(min_off, d);
                    off_sum += d;
                    ++off_count;
                    open_off = std::numeric_limits<double>::quiet_NaN();
                }
                open_on = e.time;
                break;
            case EventKind::ControllerOff:
            case EventKind::TmaxCap:
                if (!std::isnan(open_on)) {
                    const double d = e.time - open_on;
                    min_on = std::min(min_on, d);
                    on_time += d;
                    open_on = std::numeric_limits<double>::quiet_NaN();
                }
                open_off = e.time;
                break;
            case EventKind::Terminated:
                // Truncated phase: counts toward duty, not toward minima.
                if (!std::isnan(open_on)) {
                    on_time += e.time - open_on;
                    open_on = std::numeric_limits<double>::quiet_NaN();
                }
                open_off = std::numeric_limits<double>::quiet_NaN();
                break;
        }
    }
    if (!std::isnan(open_on)) on_time += t_end - open_on;

    m.duty_cycle = horizon > 0.0 ? on_time / horizon : (std::isnan(open_on) ? 0.0 : 1.0);
    m.min_on_duration = std::isfinite(min_on) ? min_on : 0.0;
    m.min_off_duration = std::isfinite(min_off) ? min_off : 0.0;
    m.mean_off_duration = off_count > 0 ? off_sum / static_cast<double>(off_count) : 0.0;

    double worst = -std::numeric_limits<double>::infinity();
    for (const Sample& s : traj.samples) {
        const double violation =
            traj.kind == RunKind::Stabilization ? s.cert - s.spec : -s.cert;
        worst = std::max(worst, violation);
    }
    m.max_constraint_violation = worst;
    return m;
}

}  // namespace itc
