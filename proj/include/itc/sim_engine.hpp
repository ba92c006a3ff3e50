#pragma once

#include <cstddef>
#include <vector>

#include "itc/certificates.hpp"
#include "itc/triggers.hpp"
#include "itc/types.hpp"

namespace itc {

enum class EventKind { ControllerOn, ControllerOff, TmaxCap, Terminated };

[[nodiscard]] const char* to_string(EventKind kind);

/// One localized trigger event. certificate_value is V (stabilization) or h
/// (safety); spec_value is S at the event for stabilization runs and 0 for
/// safety runs; c_beta is the constant selected at off events (0 elsewhere).
struct EventRecord {
    EventKind kind = EventKind::ControllerOn;
    double time = 0.0;
    State state;
    double certificate_value = 0.0;
    double spec_value = 0.0;
    double c_beta = 0.0;
};

/// One logged integration node.
struct Sample {
    double t = 0.0;
    State x;
    Mode mode = Mode::On;
    Input u;          // applied input: held while on, zero while off
    double cert = 0.0;  // V or h
    double spec = 0.0;  // S (0 in safety runs)
};

enum class RunKind { Stabilization, Safety };

struct HybridTrajectory {
    RunKind kind = RunKind::Stabilization;
    std::vector<Sample> samples;
    std::vector<EventRecord> events;
    double dt = 0.0;
    double t_final = 0.0;
    double eps_term = 0.0;   // resolved termination level
    double tol_inv = 0.0;    // resolved invariant slack
    double s0_initial = 0.0; // V(x0) resp. h(x0); scales the tolerances
    // S(t) < V(x(t)) observed during an on interval (checked a posteriori;
    // the scheme only defines S on off intervals).
    bool spec_dipped_during_on = false;
    double worst_on_dip = 0.0;  // max over on-phase samples of V - S
};

struct Metrics {
    double duty_cycle = 0.0;
    double min_on_duration = 0.0;
    double min_off_duration = 0.0;   // minimum inactive dwell time
    double mean_off_duration = 0.0;  // mean inactive dwell time
    std::size_t event_count = 0;
    double max_constraint_violation = 0.0;  // max of V - S, resp. -h
};

/// Simulate the intermittent closed loop in stabilization mode: on-phases
/// hold controller(x_held, t_on) and watch the off trigger (capped by t_max);
/// off-phases apply zero input and watch the on trigger against the
/// exponential performance spec reset at each off event. The run starts in
/// On mode at t = 0 and ends at t_final or when V drops below eps_term.
/// When a simulation error is thrown, the partially produced trajectory is
/// moved into *partial_sink if one is given.
[[nodiscard]] HybridTrajectory run_stabilization(const ControlledField& system,
                                                 const Controller& controller,
                                                 const IssCertificate& cert,
                                                 const TriggerConfig& config, const State& x0,
                                                 double t_final, double dt,
                                                 double bisection_tol = 1e-10,
                                                 HybridTrajectory* partial_sink = nullptr);

/// Simulate in safety mode with the barrier triggers. Requires h(x0, 0) >= 0.
[[nodiscard]] HybridTrajectory run_safety(const ControlledField& system,
                                          const Controller& controller,
                                          const BarrierCertificate& barrier,
                                          const TriggerConfig& config, const State& x0,
                                          double t_final, double dt,
                                          double bisection_tol = 1e-10,
                                          HybridTrajectory* partial_sink = nullptr);

/// Duty cycle, minimum/mean phase durations over completed phases, event
/// count, and the worst constraint margin. Throws Error(EmptyTrajectory) on
/// a trajectory without samples.
[[nodiscard]] Metrics compute_metrics(const HybridTrajectory& traj);

}  // namespace itc
