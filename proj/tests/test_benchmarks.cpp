#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "itc/benchmarks.hpp"
#include "itc/errors.hpp"
#include "itc/sim_engine.hpp"

using namespace itc;
using namespace itc::benchmarks;

TEST_SUITE_BEGIN("benchmarks");

TEST_CASE("stabilization oracle matches the worked example") {
    CHECK(stab_oracle_next_on(0.5, 0.5, 0.1, 1.0 / 3.0) ==
          doctest::Approx(5.5961579).epsilon(1e-7));
    CHECK(stab_oracle_next_on(0.5, 0.5, 0.1, 1.0 / 3.0) ==
          doctest::Approx(10.0 * std::log(1.75)).epsilon(1e-12));
}

TEST_CASE("stabilization oracle degeneracies") {
    // Degenerate midpoint: V_on = V_off yields a negative formula value.
    try {
        (void)stab_oracle_next_on(0.5, 0.125, 0.1, 1.0 / 3.0);
        FAIL("expected no-event");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoEvent);
    }
    // c_beta <= lambda never produces an on event.
    try {
        (void)stab_oracle_next_on(0.5, 0.5, 0.5, 0.25);
        FAIL("expected no-event");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoEvent);
    }
    // Constant spec: the trigger surface is never reached.
    CHECK(std::isinf(stab_oracle_next_on(0.5, 0.5, 0.0, 1.0 / 3.0)));
    // Duration grows without bound as lambda -> 0+.
    CHECK(stab_oracle_next_on(0.5, 0.5, 1e-6, 1.0 / 3.0) > 1e5);
}

TEST_CASE("safety oracle matches the worked cycle") {
    const SafetyCycle c = safety_oracle_cycle(0.5);
    CHECK(c.t_off == doctest::Approx(2.3507810).epsilon(1e-6));
    CHECK(c.x_off == doctest::Approx(-0.6753905).epsilon(1e-6));
    CHECK(c.c_beta == doctest::Approx(0.25));
    CHECK(c.t_on == doctest::Approx(c.t_off + 2.5868460).epsilon(1e-6));
    CHECK(c.x_on == doctest::Approx(0.6180340).epsilon(1e-6));
    CHECK(c.x_on == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("safety oracle from the origin drifts into the mirrored root") {
    const SafetyCycle c = safety_oracle_cycle(0.0);
    CHECK(c.x_off == doctest::Approx(0.6753905).epsilon(1e-6));
    CHECK(c.x_off == doctest::Approx((-1.0 + std::sqrt(41.0)) / 8.0).epsilon(1e-9));
    CHECK(c.t_off == doctest::Approx(1.3507810).epsilon(1e-6));
}

TEST_CASE("safety oracle off time is monotone in theta") {
    // The off residual hdot + omega(h) - theta d is pointwise decreasing in
    // theta, so a larger margin turns the controller off sooner.
    double prev = std::numeric_limits<double>::infinity();
    for (double theta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const SafetyCycle c = safety_oracle_cycle(0.5, theta);
        CHECK(c.t_off < prev);
        prev = c.t_off;
    }
}

TEST_CASE("safety oracle rejects states outside the safe set") {
    try {
        (void)safety_oracle_cycle(1.0);
        FAIL("expected rejection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutsideSafeSet);
    }
}

TEST_CASE("simulated event times match both oracles within max(1e-4, 10 dt)") {
    const double dt = 1e-4;
    const double tol = std::max(1e-4, 10.0 * dt);

    const auto stab = make_scalar_stab();
    const auto stab_traj = run_stabilization(stab.field, stab.controller, stab.cert, stab.config,
                                             stab.x0, 12.0, dt, 1e-10);
    REQUIRE(stab_traj.events.size() >= 3);
    const double t_off = stab_traj.events[1].time;
    const double x_off = stab_traj.events[1].state[0];
    const double v_on = stab_traj.events[0].certificate_value;
    const double oracle_on =
        t_off + stab_oracle_next_on(x_off, v_on, stab.config.lambda, stab_traj.events[1].c_beta);
    CHECK(std::abs(stab_traj.events[2].time - oracle_on) < tol);

    const auto safe = make_scalar_safety();
    const auto safe_traj = run_safety(safe.field, safe.controller, safe.barrier, safe.config,
                                      safe.x0, 20.0, dt, 1e-10);
    const SafetyCycle cycle = safety_oracle_cycle(safe.x0[0]);
    REQUIRE(safe_traj.events.size() >= 3);
    CHECK(std::abs(safe_traj.events[1].time - cycle.t_off) < tol);
    CHECK(std::abs(safe_traj.events[2].time - cycle.t_on) < tol);
}

TEST_CASE("V strictly decreases across successive on events") {
    const auto sc = make_scalar_stab();
    const auto traj = run_stabilization(sc.field, sc.controller, sc.cert, sc.config, sc.x0, 40.0,
                                        1e-3, 1e-10);
    std::vector<double> v_at_on;
    for (const EventRecord& e : traj.events) {
        if (e.kind == EventKind::ControllerOn) v_at_on.push_back(e.certificate_value);
    }
    REQUIRE(v_at_on.size() >= 3);
    for (std::size_t i = 1; i < v_at_on.size(); ++i) CHECK(v_at_on[i] < v_at_on[i - 1]);
}

TEST_CASE("the barrier stays nonnegative over an initial-condition sweep") {
    const auto sc = make_scalar_safety();
    for (int i = 0; i < 5; ++i) {
        const double x0 = -0.8 + 0.4 * i;  // -0.8 .. 0.8
        const auto traj = run_safety(sc.field, sc.controller, sc.barrier, sc.config, State{x0},
                                     20.0, 1e-3, 1e-10);
        double min_h = std::numeric_limits<double>::infinity();
        for (const Sample& s : traj.samples) min_h = std::min(min_h, s.cert);
        CHECK(min_h >= -1e-6);
    }
}

TEST_SUITE_END();
