#include "itc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "itc/artifacts.hpp"
#include "itc/certificates.hpp"
#include "itc/errors.hpp"
#include "itc/triggers.hpp"

namespace itc::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[nodiscard]] bool is_off_family(EventKind k) {
    return k == EventKind::ControllerOff || k == EventKind::TmaxCap;
}

// Samples grouped under the event that opened their phase. The boundary
// sample at an event time belongs to the newly opened phase; sample times
// read back from the CSV are rounded to 12 significant digits, so boundary
// matching needs a tolerance plus the sample's logged mode to disambiguate
// nodes that sit close to an event.
struct Interval {
    std::size_t event_index;
    std::size_t first_sample;
    std::size_t last_sample;  // exclusive
};

[[nodiscard]] Mode interval_mode(const std::vector<EventRecord>& events, std::size_t e) {
    // Terminated events do not flip the phase; inherit the prior mode.
    while (true) {
        if (events[e].kind == EventKind::ControllerOn) return Mode::On;
        if (events[e].kind != EventKind::Terminated) return Mode::Off;
        if (e == 0) return Mode::Off;
        --e;
    }
}

[[nodiscard]] std::vector<Interval> split_intervals(const HybridTrajectory& traj) {
    std::vector<Interval> out;
    if (traj.events.empty()) return out;
    const auto& events = traj.events;
    std::size_t s = 0;
    for (std::size_t e = 0; e < events.size(); ++e) {
        Interval iv{e, s, s};
        if (e + 1 < events.size()) {
            const double t_next = events[e + 1].time;
            const double tol = 1e-9 * std::max(1.0, std::abs(t_next));
            const Mode next_mode = interval_mode(events, e + 1);
            while (s < traj.samples.size()) {
                const Sample& smp = traj.samples[s];
                if (smp.t > t_next + tol) break;
                if (std::abs(smp.t - t_next) <= tol && smp.mode == next_mode) break;
                ++s;
            }
        } else {
            s = traj.samples.size();
        }
        iv.last_sample = s;
        out.push_back(iv);
    }
    return out;
}

class Checker {
public:
    explicit Checker(VerifyReport& report) : report_(report) {}

    // Track the worst (largest) violation of "value <= tol".
    void observe(const std::string& name, double value, double t, double tol,
                 const std::string& what) {
        CheckResult& c = slot(name);
        if (value > c.worst_margin) {
            c.worst_margin = value;
            c.worst_time = t;
        }
        if (value > tol && c.pass) {
            c.pass = false;
            c.detail = what + " at t = " + std::to_string(t);
        }
    }

    void fail(const std::string& name, const std::string& why, double t = 0.0) {
        CheckResult& c = slot(name);
        c.pass = false;
        if (c.detail.empty()) c.detail = why;
        c.worst_time = t;
    }

    void touch(const std::string& name) { (void)slot(name); }

    void finish() {
        for (CheckResult& c : checks_) {
            report_.checks.push_back(c);
            if (!c.pass) report_.pass = false;
        }
    }

private:
    CheckResult& slot(const std::string& name) {
        for (CheckResult& c : checks_) {
            if (c.name == name) return c;
        }
        checks_.push_back(CheckResult{name, true, -kInf, 0.0, ""});
        return checks_.back();
    }

    std::vector<CheckResult> checks_;  // flushed in first-touch order
    VerifyReport& report_;
};

}  // namespace

std::string VerifyReport::to_json() const {
    nlohmann::ordered_json checks_json = nlohmann::ordered_json::array();
    for (const CheckResult& c : checks) {
        checks_json.push_back({
            {"name", c.name},
            {"pass", c.pass},
            {"worst_margin", std::isfinite(c.worst_margin) ? nlohmann::ordered_json(c.worst_margin)
                                                           : nlohmann::ordered_json(nullptr)},
            {"worst_time", c.worst_time},
            {"detail", c.detail},
        });
    }
    nlohmann::ordered_json j{{"pass", pass}, {"checks", checks_json}};
    return j.dump(2);
}

VerifyReport verify_run(const HybridTrajectory& traj, const RunConfig& config, double tol_inv) {
    VerifyReport report;
    Checker check(report);
    const ScenarioObjects objects = build_scenario(config);
    const bool safety = config.mode == RunKind::Safety;

    // --- event alternation and strictly increasing times ---
    check.touch("event_alternation");
    bool expect_on = true;
    for (std::size_t i = 0; i < traj.events.size(); ++i) {
        const EventRecord& e = traj.events[i];
        if (i > 0 && !(e.time > traj.events[i - 1].time)) {
            check.fail("event_alternation", "event times not strictly increasing", e.time);
        }
        if (e.kind == EventKind::Terminated) {
            if (i + 1 != traj.events.size()) {
                check.fail("event_alternation", "terminated event is not last", e.time);
            }
            continue;
        }
        const bool is_on = e.kind == EventKind::ControllerOn;
        if (is_on != expect_on) {
            check.fail("event_alternation",
                       std::string("unexpected ") + to_string(e.kind) + " event", e.time);
        }
        expect_on = !is_on;
    }

    const std::vector<Interval> intervals = split_intervals(traj);

    // --- logged columns against recomputation ---
    const double tol_logged = 1e-8;
    for (const Interval& iv : intervals) {
        const EventRecord& ev = traj.events[iv.event_index];
        for (std::size_t s = iv.first_sample; s < iv.last_sample; ++s) {
            const Sample& smp = traj.samples[s];
            const double cert_recomputed = safety ? objects.barrier->h(smp.x, smp.t)
                                                  : objects.cert->value(smp.x, smp.t);
            check.observe("logged_consistency",
                          std::abs(smp.cert - cert_recomputed) /
                              std::max(1.0, std::abs(cert_recomputed)),
                          smp.t, tol_logged, "logged V_or_h deviates from recomputation");
            double spec_recomputed = 0.0;
            if (!safety) {
                // S extends the exponential anchored at the governing event.
                spec_recomputed =
                    ev.spec_value * std::exp(-config.trigger.lambda * (smp.t - ev.time));
                if (ev.kind == EventKind::ControllerOn || ev.kind == EventKind::Terminated) {
                    // On intervals extend the previous off interval's spec; the
                    // event record carries S at the event, so the same
                    // expression applies. The first on interval has constant S.
                    if (iv.event_index == 0) spec_recomputed = ev.spec_value;
                }
            }
            check.observe("logged_consistency",
                          std::abs(smp.spec - spec_recomputed) /
                              std::max(1.0, std::abs(spec_recomputed)),
                          smp.t, tol_logged, "logged S deviates from recomputation");
        }
    }

    if (!safety) {
        // --- performance envelope: V <= S on off intervals ---
        check.touch("performance_envelope");
        // --- comparison bound: S - V >= exp(-c_beta (t - t_off)) (S0 - V0) ---
        check.touch("exponential_comparison_bound");
        // --- on-phase decrease: Vdot <= (sigma - 1) * alpha_term ---
        check.touch("on_phase_decrease");
        for (const Interval& iv : intervals) {
            const EventRecord& ev = traj.events[iv.event_index];
            if (is_off_family(ev.kind)) {
                const double s_off = ev.spec_value;
                const double v_off = ev.certificate_value;
                for (std::size_t s = iv.first_sample; s < iv.last_sample; ++s) {
                    const Sample& smp = traj.samples[s];
                    if (smp.mode != Mode::Off) continue;
                    const double v = objects.cert->value(smp.x, smp.t);
                    const double spec =
                        s_off * std::exp(-config.trigger.lambda * (smp.t - ev.time));
                    check.observe("performance_envelope", v - spec, smp.t, tol_inv,
                                  "V exceeded S during an off interval");
                    const double floor =
                        std::exp(-ev.c_beta * (smp.t - ev.time)) * (s_off - v_off);
                    check.observe("exponential_comparison_bound", floor - (spec - v), smp.t, tol_inv,
                                  "S - V fell under the exponential comparison bound");
                }
            } else if (ev.kind == EventKind::ControllerOn) {
                const Input u_held = objects.controller(ev.state, ev.time);
                for (std::size_t s = iv.first_sample; s < iv.last_sample; ++s) {
                    const Sample& smp = traj.samples[s];
                    if (smp.mode != Mode::On) continue;
                    const double vdot =
                        lie_derivative_V(objects.field, *objects.cert, smp.x, u_held, smp.t);
                    const double decay = objects.cert->decay_term(smp.x, smp.t);
                    check.observe("on_phase_decrease",
                                  vdot - (config.trigger.sigma - 1.0) * decay, smp.t, tol_inv,
                                  "on-phase decrease rate violated");
                }
            }
        }
    } else {
        // --- safe set forward invariance: h >= 0 everywhere ---
        check.touch("barrier_nonnegative");
        for (const Sample& smp : traj.samples) {
            const double h = objects.barrier->h(smp.x, smp.t);
            check.observe("barrier_nonnegative", -h, smp.t, tol_inv, "barrier went negative");
        }
        // --- trigger-enforced rate inequalities per phase ---
        check.touch("safe_phase_rates");
        for (const Interval& iv : intervals) {
            const EventRecord& ev = traj.events[iv.event_index];
            for (std::size_t s = iv.first_sample; s < iv.last_sample; ++s) {
                const Sample& smp = traj.samples[s];
                const double h = objects.barrier->h(smp.x, smp.t);
                if (ev.kind == EventKind::ControllerOn) {
                    if (smp.mode != Mode::On) continue;
                    State e_on(smp.x.size());
                    for (std::size_t i = 0; i < smp.x.size(); ++i) {
                        e_on[i] = ev.state[i] - smp.x[i];
                    }
                    const double rate = objects.barrier->hdot(smp.x, e_on, smp.t);
                    const double bound = -objects.barrier->omega.eval(h) +
                                         config.trigger.theta * objects.barrier->d;
                    check.observe("safe_phase_rates", bound - rate, smp.t, tol_inv,
                                  "on-phase barrier rate under the trigger bound");
                } else if (is_off_family(ev.kind)) {
                    if (smp.mode != Mode::Off) continue;
                    State e_off(smp.x.size());
                    for (std::size_t i = 0; i < smp.x.size(); ++i) e_off[i] = -smp.x[i];
                    const double rate = objects.barrier->hdot(smp.x, e_off, smp.t);
                    const double bound = -ev.c_beta * objects.barrier->omega.eval(h);
                    check.observe("safe_phase_rates", bound - rate, smp.t, tol_inv,
                                  "off-phase barrier rate under the trigger bound");
                }
            }
        }
    }

    // --- no Zeno: completed phases last at least 2 dt ---
    check.touch("no_zeno");
    for (std::size_t i = 0; i + 1 < traj.events.size(); ++i) {
        if (traj.events[i].kind == EventKind::Terminated ||
            traj.events[i + 1].kind == EventKind::Terminated) {
            continue;
        }
        const double gap = traj.events[i + 1].time - traj.events[i].time;
        check.observe("no_zeno", 2.0 * config.dt - gap, traj.events[i + 1].time, 0.0,
                      "completed phase shorter than 2 dt");
    }

    check.finish();
    return report;
}

VerifyReport verify_files(const std::string& traj_csv, const std::string& events_jsonl,
                          const std::string& summary_json) {
    HybridTrajectory traj = read_trajectory_csv(traj_csv);
    read_events_jsonl(events_jsonl, traj);
    const SummaryInfo info = read_summary_json(summary_json);
    traj.kind = info.config.mode;
    traj.dt = info.config.dt;
    traj.t_final = info.config.t_final;
    traj.eps_term = info.eps_term;
    traj.tol_inv = info.tol_inv;
    traj.s0_initial = info.s0_initial;
    return verify_run(traj, info.config, info.tol_inv);
}

}  // namespace itc::cli
